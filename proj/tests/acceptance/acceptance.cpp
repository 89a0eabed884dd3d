// Acceptance suite: one pass/fail line per criterion. Run all criteria with
// no arguments, or a single one with --criterion N. Exits nonzero on failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "discplan/instance.hpp"
#include "discplan/monotone.hpp"
#include "discplan/nonmonotone.hpp"
#include "discplan/oracles.hpp"
#include "discplan/solution.hpp"

using namespace discplan;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Criterion {
    int id;
    const char* name;
    bool (*run)(std::string& detail);
};

RegionGraph graph_of(const Instance& inst, double divisor = 10.0) {
    return decompose(inst.workspace, inst.radius, inst.labeled_poses(), inst.radius / divisor);
}

// Fixed corpus shared by criteria 1, 3, and 7: 25 instances per (n, density)
// cell over n in {3..6} x density in {0.1, 0.2}.
std::vector<Instance> small_corpus() {
    std::vector<Instance> corpus;
    for (int n : {3, 4, 5, 6})
        for (double d : {0.1, 0.2}) {
            int produced = 0;
            for (uint64_t seed = 0; produced < 25; ++seed) {
                auto inst = generate_instance(n, d, {10, 10}, seed * 8 + n + (d > 0.15 ? 4 : 0));
                if (!inst) continue;
                ++produced;
                corpus.push_back(std::move(*inst));
            }
        }
    return corpus;
}

bool dfs_verdict(const Instance& inst, const RegionGraph& g, double limit_s,
                 SolverCounters* counters = nullptr) {
    PathDictionary dict;
    return dfs_dp(inst, g, Arrangement::all_start(inst.n), Arrangement::all_goal(inst.n), dict,
                  limit_s > 0 ? Deadline::after_seconds(limit_s) : Deadline::never(), counters)
        .reached;
}

// ---------------------------------------------------------------- criterion 1
bool criterion_monotone_completeness(std::string& detail) {
    const std::vector<Instance> corpus = small_corpus();
    int agree = 0;
    double worst_query = 0.0;
    for (const Instance& inst : corpus) {
        const RegionGraph g = graph_of(inst);

        const double t0 = now_s();
        const bool dp = dfs_verdict(inst, g, 1.0);
        const double t1 = now_s();
        MrsResult mrs = mrs_backtracking(inst, g, Deadline::after_seconds(1.0));
        const double t2 = now_s();

        worst_query = std::max({worst_query, t1 - t0, t2 - t1});
        if (mrs.deadline_hit) continue;  // counts as disagreement
        agree += (dp == mrs.solution.has_value());
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/%zu verdicts agree, worst query %.3fs", agree,
                  corpus.size(), worst_query);
    detail = buf;
    return agree == static_cast<int>(corpus.size()) && corpus.size() == 200 && worst_query < 1.0;
}

// ---------------------------------------------------------------- criterion 2
bool criterion_interference_equivalence(std::string& detail) {
    const double t0 = now_s();
    int checked = 0;
    int equal = 0;
    int produced = 0;
    for (uint64_t seed = 0; produced < 50; ++seed) {
        const int n = 3 + static_cast<int>(seed % 6);
        auto inst = generate_instance(n, 0.1 + 0.03 * (seed % 6), {10, 10}, 1000 + seed);
        if (!inst) continue;
        ++produced;
        inst->buffers = generate_candidate_buffers(*inst, n, 100, seed);
        const RegionGraph g = graph_of(*inst);
        const double r = inst->radius;
        SplitMix64 rng(seed * 131 + 7);

        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec2> polyline;
            const int segments = 1 + static_cast<int>(rng.next_below(5));
            for (int i = 0; i <= segments; ++i)
                polyline.push_back({rng.next_in(r, inst->workspace.width - r),
                                    rng.next_in(r, inst->workspace.height - r)});
            const Walk walk = curve_to_walk(g, polyline);

            // independent dense-sample oracle: quantize each half-cell-step
            // sample to its cell center, then run the exact pairwise test
            LabelSet oracle(g.num_labels());
            const auto& poses = g.poses();
            const double step = g.grid().sample_step();
            auto absorb = [&](Vec2 p) {
                const Vec2 c = g.grid().cell_center(g.grid().cell_of(p));
                for (size_t b = 0; b < poses.size(); ++b)
                    if (discs_collide(c, poses[b].second, r)) oracle.set(static_cast<int>(b));
            };
            absorb(polyline.front());
            for (size_t i = 0; i + 1 < polyline.size(); ++i) {
                const double len = distance(polyline[i], polyline[i + 1]);
                const int samples = std::max(1, static_cast<int>(std::ceil(len / step)));
                for (int s = 1; s <= samples; ++s) {
                    const double t = static_cast<double>(s) / samples;
                    absorb({polyline[i].x + t * (polyline[i + 1].x - polyline[i].x),
                            polyline[i].y + t * (polyline[i + 1].y - polyline[i].y)});
                }
            }
            ++checked;
            equal += (walk.interference == oracle);
        }
    }
    const double elapsed = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/%d exact matches in %.1fs", equal, checked, elapsed);
    detail = buf;
    return equal == checked && checked == 1000 && elapsed < 120.0;
}

// ---------------------------------------------------------------- criterion 3
bool criterion_realization_round_trip(std::string& detail) {
    const std::vector<Instance> corpus = small_corpus();
    int walks = 0;
    int round_trips = 0;
    int solutions = 0;
    int replays_ok = 0;
    for (const Instance& inst : corpus) {
        const RegionGraph g = graph_of(inst);
        PathDictionary dict;
        MonotoneTree tree =
            dfs_dp(inst, g, Arrangement::all_start(inst.n), Arrangement::all_goal(inst.n), dict,
                   Deadline::after_seconds(5.0));
        if (!tree.reached) continue;
        Solution sol = extract_solution(inst, g, tree, tree.target_key);
        ++solutions;
        replays_ok += replay_solution(inst, g, sol).ok;
        for (const SolutionAction& action : sol.actions) {
            ++walks;
            const Walk back = curve_to_walk(g, action.polyline);
            round_trips += (back == action.walk);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/%d walk round trips, %d/%d replays clean",
                  round_trips, walks, replays_ok, solutions);
    detail = buf;
    return walks > 0 && round_trips == walks && replays_ok == solutions;
}

// ---------------------------------------------------------------- criterion 4
bool criterion_one_buffer_optimality(std::string& detail) {
    int certified = 0;
    int exact = 0;
    double worst = 0.0;
    for (uint64_t seed = 0; certified < 30 && seed < 4000; ++seed) {
        const int n = 4 + static_cast<int>(seed % 3);
        auto inst = generate_instance(n, 0.3, {10, 10}, 2000 + seed);
        if (!inst) continue;
        inst->buffers = generate_candidate_buffers(*inst, n, 100, seed);
        const RegionGraph g = graph_of(*inst);
        if (dfs_verdict(*inst, g, 5.0)) continue;  // monotone: not a 1-buffer case

        BruteForceResult oracle = brute_force_optimal(*inst, g, 1, Deadline::after_seconds(20.0));
        if (oracle.status != BruteForceResult::Status::Solved) continue;
        int moved = 0;
        for (int i = 0; i < inst->n; ++i) moved += !(inst->starts[i] == inst->goals[i]);
        if (oracle.min_actions != moved + 1) continue;
        ++certified;

        SearchConfig cfg;
        cfg.exhaustive = true;
        cfg.seed = seed;
        cfg.time_limit_s = 60.0;
        const double t0 = now_s();
        InformedResult res = informed_search(*inst, g, cfg);
        worst = std::max(worst, now_s() - t0);
        exact += (res.status == SearchStatus::Solved && res.solution->num_buffers == 1);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/%d certified instances solved with exactly 1 buffer, worst %.1fs",
                  exact, certified, worst);
    detail = buf;
    return certified == 30 && exact == 30 && worst < 60.0;
}

// ---------------------------------------------------------------- criterion 5
bool criterion_desk_scale_nonmonotone(std::string& detail) {
    const int kInstances = 20;
    std::vector<Instance> corpus;
    for (uint64_t seed = 0; static_cast<int>(corpus.size()) < kInstances; ++seed) {
        auto inst = generate_instance(10, 0.225, {10, 10}, 3000 + seed);
        if (!inst) continue;
        inst->buffers = generate_candidate_buffers(*inst, 10, 100, seed);
        corpus.push_back(std::move(*inst));
    }

    int informed_success = 0;
    int random_success = 0;
    double informed_buffers = 0.0;
    double random_buffers = 0.0;
    int one_buffer_cases = 0;
    double informed_buffers_on_subset = 0.0;
    int informed_solved_on_subset = 0;

    for (size_t i = 0; i < corpus.size(); ++i) {
        const Instance& inst = corpus[i];
        const RegionGraph g = graph_of(inst);

        SearchConfig cfg;
        cfg.seed = 100 + i;
        cfg.time_limit_s = 300.0;
        InformedResult informed = informed_search(inst, g, cfg);
        InformedResult random = random_ablation_search(inst, g, cfg);

        if (informed.status == SearchStatus::Solved) {
            ++informed_success;
            informed_buffers += informed.solution->num_buffers;
        }
        if (random.status == SearchStatus::Solved) {
            ++random_success;
            random_buffers += random.solution->num_buffers;
        }

        // oracle-certified 1-buffer subset (budget-1 optimum == movers + 1)
        int moved = 0;
        for (int k = 0; k < inst.n; ++k) moved += !(inst.starts[k] == inst.goals[k]);
        if (informed.status == SearchStatus::Solved && informed.solution->num_buffers > 0) {
            BruteForceResult oracle =
                brute_force_optimal(inst, g, 1, Deadline::after_seconds(60.0));
            if (oracle.status == BruteForceResult::Status::Solved &&
                oracle.min_actions == moved + 1) {
                ++one_buffer_cases;
                informed_buffers_on_subset += informed.solution->num_buffers;
                ++informed_solved_on_subset;
            }
        }
    }

    const double informed_mean =
        informed_success ? informed_buffers / informed_success : 0.0;
    const double random_mean = random_success ? random_buffers / random_success : 0.0;
    const double subset_mean =
        informed_solved_on_subset ? informed_buffers_on_subset / informed_solved_on_subset : 0.0;

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "success informed %d/20 vs random %d/20; mean buffers %.2f vs %.2f; "
                  "1-buffer subset %d cases, informed mean %.2f",
                  informed_success, random_success, informed_mean, random_mean, one_buffer_cases,
                  subset_mean);
    detail = buf;
    return informed_success >= random_success && informed_mean <= random_mean &&
           (one_buffer_cases == 0 || subset_mean <= 1.5);
}

// ---------------------------------------------------------------- criterion 6
bool criterion_monotone_scaling(std::string& detail) {
    std::vector<Instance> corpus;
    for (uint64_t seed = 0; corpus.size() < 20 && seed < 2000; ++seed) {
        auto inst = generate_instance(15, 0.1, {10, 10}, 5000 + seed);
        if (!inst) continue;
        // monotone-certified by the complete solver
        const RegionGraph g = graph_of(*inst);
        if (!dfs_verdict(*inst, g, 60.0)) continue;
        corpus.push_back(std::move(*inst));
    }

    int dfs_success = 0;
    uint64_t dfs_expansions = 0;
    uint64_t mrs_expansions = 0;
    double worst = 0.0;
    for (const Instance& inst : corpus) {
        const RegionGraph g = graph_of(inst);
        SolverCounters dp_counters;
        const double t0 = now_s();
        const bool reached = dfs_verdict(inst, g, 60.0, &dp_counters);
        worst = std::max(worst, now_s() - t0);
        dfs_success += reached;
        dfs_expansions += dp_counters.nodes_expanded;

        MrsResult mrs = mrs_backtracking(inst, g, Deadline::after_seconds(20.0));
        mrs_expansions += mrs.counters.nodes_expanded;
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "dfs_dp %d/%zu within 60s (worst %.2fs); mean expansions %.1f vs mrs %.1f",
                  dfs_success, corpus.size(), worst, dfs_expansions / 20.0,
                  mrs_expansions / 20.0);
    detail = buf;
    return corpus.size() == 20 && dfs_success >= 19 && dfs_expansions < mrs_expansions;
}

// ---------------------------------------------------------------- criterion 7
bool criterion_resolution_stability(std::string& detail) {
    const std::vector<Instance> corpus = small_corpus();
    int flips = 0;
    for (const Instance& inst : corpus) {
        const bool coarse = dfs_verdict(inst, graph_of(inst, 10.0), 10.0);
        const bool fine = dfs_verdict(inst, graph_of(inst, 20.0), 30.0);
        flips += (coarse != fine);
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d/%zu verdict flips between r/10 and r/20", flips,
                  corpus.size());
    detail = buf;
    return flips == 0;
}

// ---------------------------------------------------------------- criterion 8
bool criterion_cli_determinism(std::string& detail) {
    namespace fs = std::filesystem;
    const std::string cli = DISCPLAN_CLI_PATH;
    const fs::path dir =
        fs::temp_directory_path() / ("discplan_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto file = [&](const char* name) { return (dir / name).string(); };
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    bool ok = true;
    std::string failed;

    auto expect_identical = [&](const char* what, const std::string& args_a,
                                const std::string& file_a, const std::string& args_b,
                                const std::string& file_b) {
        if (run(args_a) != 0 || run(args_b) != 0 || slurp(file_a) != slurp(file_b) ||
            slurp(file_a).empty()) {
            ok = false;
            failed += std::string(" ") + what;
        }
    };

    expect_identical("gen", "gen -n 10 -d 0.225 --seed 9 -o " + file("g1.json"), file("g1.json"),
                     "gen -n 10 -d 0.225 --seed 9 -o " + file("g2.json"), file("g2.json"));
    expect_identical(
        "solve",
        "solve " + file("g1.json") + " --mode informed --seed 3 --canonical -o " + file("s1.json"),
        file("s1.json"),
        "solve " + file("g1.json") + " --mode informed --seed 3 --canonical -o " + file("s2.json"),
        file("s2.json"));
    expect_identical("bench",
                     "bench " + file("g1.json") +
                         " --mode informed --mode random --seed 3 --canonical --jobs 2 -o " +
                         file("b1.csv"),
                     file("b1.csv"),
                     "bench " + file("g1.json") +
                         " --mode informed --mode random --seed 3 --canonical --jobs 2 -o " +
                         file("b2.csv"),
                     file("b2.csv"));
    expect_identical("viz", "viz " + file("g1.json") + " -o " + file("v1.svg"), file("v1.svg"),
                     "viz " + file("g1.json") + " -o " + file("v2.svg"), file("v2.svg"));

    fs::remove_all(dir);
    detail = ok ? "gen/solve/bench/viz byte-identical across reruns"
                : ("non-deterministic:" + failed);
    return ok;
}

const Criterion kCriteria[] = {
    {1, "monotone completeness (dfs_dp == mrs over 200 instances)", criterion_monotone_completeness},
    {2, "interference equivalence (1000 random curves)", criterion_interference_equivalence},
    {3, "realization round trip + collision-free replay", criterion_realization_round_trip},
    {4, "one-buffer optimality in exhaustive mode (30 certified)", criterion_one_buffer_optimality},
    {5, "desk-scale non-monotone replication (n=10, d=0.225)", criterion_desk_scale_nonmonotone},
    {6, "monotone scaling at n=15 (success + expansions vs mrs)", criterion_monotone_scaling},
    {7, "resolution stability r/10 -> r/20 (0 flips)", criterion_resolution_stability},
    {8, "CLI byte-determinism under fixed seeds", criterion_cli_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = -1;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (only > 0 && criterion.id != only) continue;
        const double t0 = now_s();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name, detail.c_str(), now_s() - t0);
        std::fflush(stdout);
        failures += !ok;
    }
    return failures == 0 ? 0 : 1;
}

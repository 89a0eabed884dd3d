#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "discplan/instance.hpp"
#include "discplan/monotone.hpp"
#include "discplan/nonmonotone.hpp"
#include "discplan/oracles.hpp"
#include "discplan/svg.hpp"

namespace {

using namespace discplan;

constexpr int kExitOk = 0;
constexpr int kExitGenerationFailure = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitInputMismatch = 5;

struct SolveOutcome {
    bool solved = false;
    bool timeout = false;
    std::optional<Solution> solution;
    double time_s = 0.0;
};

RegionGraph build_graph(const Instance& inst, double cell_size_factor) {
    return decompose(inst.workspace, inst.radius, inst.labeled_poses(),
                     inst.radius / cell_size_factor);
}

// Candidate buffers are produced after instance creation and stored on it;
// modes that never park objects run on the instance as loaded.
Instance with_buffers(Instance inst, uint64_t seed) {
    if (inst.buffers.empty() && inst.n > 0)
        inst.buffers = generate_candidate_buffers(inst, inst.n, 100, seed);
    return inst;
}

SolveOutcome run_mode(const Instance& inst, const RegionGraph& g, const std::string& mode,
                      double time_limit, uint64_t seed, bool exhaustive, int pert_object,
                      int pert_buffer, int max_buffer_visits) {
    SolveOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (mode == "monotone") {
        PathDictionary dict;
        MonotoneTree tree = dfs_dp(inst, g, Arrangement::all_start(inst.n),
                                   Arrangement::all_goal(inst.n), dict,
                                   Deadline::after_seconds(time_limit));
        out.time_s = elapsed();
        out.timeout = tree.deadline_hit;
        if (tree.reached) {
            out.solved = true;
            out.solution = extract_solution(inst, g, tree, tree.target_key);
        }
    } else if (mode == "informed" || mode == "random") {
        SearchConfig cfg;
        cfg.exhaustive = exhaustive;
        cfg.time_limit_s = time_limit;
        cfg.seed = seed;
        InformedResult res = mode == "informed" ? informed_search(inst, g, cfg)
                                                : random_ablation_search(inst, g, cfg);
        out.time_s = res.wall_time_s;
        out.timeout = res.status == SearchStatus::DeadlineExceeded ||
                      res.status == SearchStatus::NodeLimit;
        if (res.status == SearchStatus::Solved) {
            out.solved = true;
            out.solution = std::move(res.solution);
        }
    } else if (mode == "edfs") {
        if (pert_object < 0 || pert_object >= inst.n)
            throw std::invalid_argument("edfs mode requires --pert-object in [0,n)");
        if (pert_buffer < 0 || pert_buffer >= static_cast<int>(inst.buffers.size()))
            throw std::invalid_argument("edfs mode requires --pert-buffer into the buffer list");
        PathDictionary dict;
        MonotoneTree tree = edfs_dp(inst, g, Arrangement::all_start(inst.n),
                                    Arrangement::all_goal(inst.n),
                                    {pert_object, PoseLabel::buffer(pert_buffer)}, dict,
                                    Deadline::after_seconds(time_limit));
        out.time_s = elapsed();
        out.timeout = tree.deadline_hit;
        if (tree.reached) {
            out.solved = true;
            out.solution = extract_solution(inst, g, tree, tree.target_key);
        }
    } else if (mode == "oracle") {
        BruteForceResult res =
            brute_force_optimal(inst, g, max_buffer_visits, Deadline::after_seconds(time_limit));
        out.time_s = elapsed();
        out.timeout = res.status == BruteForceResult::Status::DeadlineExceeded;
        if (res.status == BruteForceResult::Status::Solved) {
            out.solved = true;
            out.solution = std::move(res.solution);
        }
    } else if (mode == "mrs") {
        MrsResult res = mrs_backtracking(inst, g, Deadline::after_seconds(time_limit));
        out.time_s = elapsed();
        out.timeout = res.deadline_hit;
        if (res.solution) {
            out.solved = true;
            out.solution = std::move(res.solution);
        }
    } else {
        throw std::invalid_argument("unknown mode: " + mode);
    }
    if (out.solution) {
        out.solution->seed = seed;
        out.solution->time_s = out.time_s;
    }
    return out;
}

int cmd_gen(int n, double density_level, double width, double height, uint64_t seed,
            int buffer_count, const std::string& out_path) {
    std::optional<Instance> inst = generate_instance(n, density_level, {width, height}, seed);
    if (!inst) {
        std::cerr << "generation failed: no space left for a valid placement at density "
                  << density_level << " (n=" << n << ", seed=" << seed << ")\n";
        return kExitGenerationFailure;
    }
    if (buffer_count > 0)
        inst->buffers = generate_candidate_buffers(*inst, buffer_count, 100, seed);
    save_instance(*inst, out_path);
    std::cout << "wrote " << out_path << " n=" << n << " density=" << density(*inst)
              << " radius=" << inst->radius << "\n";
    return kExitOk;
}

struct BenchRow {
    std::string instance;
    std::string mode;
    bool solved = false;
    int actions = -1;
    int buffers = -1;
    double time_s = 0.0;
    uint64_t seed = 0;
    int n = 0;
};

int cmd_bench(const std::vector<std::string>& files, const std::vector<std::string>& modes,
              double time_limit, int jobs, uint64_t seed, bool exhaustive, bool canonical,
              double cell_factor, const std::string& out_csv) {
    struct Task {
        std::string file;
        std::string mode;
    };
    std::vector<Task> tasks;
    for (const std::string& f : files)
        for (const std::string& m : modes) tasks.push_back({f, m});

    std::vector<BenchRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    std::mutex io_mutex;

    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            BenchRow row;
            row.instance = tasks[i].file;
            row.mode = tasks[i].mode;
            row.seed = seed;
            try {
                const Instance inst = with_buffers(load_instance(tasks[i].file), seed);
                const RegionGraph g = build_graph(inst, cell_factor);
                const SolveOutcome out =
                    run_mode(inst, g, tasks[i].mode, time_limit, seed, exhaustive, -1, -1, 2);
                row.solved = out.solved;
                row.time_s = canonical ? 0.0 : out.time_s;
                row.n = inst.n;
                if (out.solution) {
                    row.actions = out.solution->num_actions;
                    row.buffers = out.solution->num_buffers;
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cerr << tasks[i].file << " [" << tasks[i].mode << "]: " << e.what() << "\n";
            }
            rows[i] = std::move(row);
        }
    };

    std::vector<std::thread> pool;
    const int workers = std::max(1, jobs);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    std::ofstream out(out_csv, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_csv << "\n";
        return 1;
    }
    out << "instance,mode,solved,actions,buffers,time_s,seed\n";
    char buf[64];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.time_s);
        out << r.instance << ',' << r.mode << ',' << (r.solved ? 1 : 0) << ',' << r.actions << ','
            << r.buffers << ',' << buf << ',' << r.seed << "\n";
    }

    // Aggregates per (mode, n), re-derivable from the data rows above.
    std::map<std::pair<std::string, int>, std::vector<const BenchRow*>> groups;
    for (const BenchRow& r : rows) groups[{r.mode, r.n}].push_back(&r);
    out << "\nmode,n,success_rate,mean_buffers,mean_time_s\n";
    for (const auto& [key, group] : groups) {
        int solved = 0;
        double buffers = 0.0;
        double time_sum = 0.0;
        for (const BenchRow* r : group) {
            solved += r->solved;
            if (r->solved) buffers += r->buffers;
            time_sum += r->time_s;
        }
        const double rate = static_cast<double>(solved) / group.size();
        const double mean_buf = solved ? buffers / solved : 0.0;
        std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.6f", rate, mean_buf,
                      time_sum / group.size());
        out << key.first << ',' << key.second << ',' << buf << "\n";
    }
    std::cout << "wrote " << out_csv << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discplan: labeled uniform-disc rearrangement planning toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    int gen_n = 10;
    double gen_density = 0.2, gen_w = 10.0, gen_h = 10.0;
    uint64_t gen_seed = 0;
    int gen_buffers = -1;
    std::string gen_out = "instance.json";
    gen->add_option("-n", gen_n, "Number of objects")->required();
    gen->add_option("-d,--density", gen_density, "Object area density in (0, 0.9)")->required();
    gen->add_option("--width", gen_w, "Workspace width");
    gen->add_option("--height", gen_h, "Workspace height");
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--buffers", gen_buffers, "Candidate buffer count (default n, 0 for none)");
    gen->add_option("-o,--out", gen_out, "Output instance file");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve an instance");
    std::string solve_instance, solve_mode = "informed", solve_out;
    double solve_limit = -1.0, solve_cell = 10.0;
    uint64_t solve_seed = 0;
    bool solve_exhaustive = false, solve_canonical = false;
    int pert_object = -1, pert_buffer = -1, max_visits = 2;
    solve->add_option("instance", solve_instance, "Instance file")->required();
    solve->add_option("--mode", solve_mode, "monotone|informed|random|edfs|oracle|mrs");
    solve->add_option("--time-limit", solve_limit, "Seconds (default 500 monotone, 300 otherwise)");
    solve->add_option("--seed", solve_seed, "Random seed");
    solve->add_option("--cell-size", solve_cell, "Resolution divisor: cell = r / this");
    solve->add_flag("--exhaustive", solve_exhaustive, "Exhaust perturbations depth by depth");
    solve->add_flag("--canonical", solve_canonical, "Write time_s as 0 for byte-stable output");
    solve->add_option("--pert-object", pert_object, "edfs mode: object to perturb");
    solve->add_option("--pert-buffer", pert_buffer, "edfs mode: buffer index");
    solve->add_option("--max-buffer-visits", max_visits, "oracle mode: buffer action budget");
    solve->add_option("-o,--out", solve_out, "Output solution file");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a corpus benchmark");
    std::vector<std::string> bench_files, bench_modes{"informed"};
    double bench_limit = 300.0, bench_cell = 10.0;
    int bench_jobs = 1;
    uint64_t bench_seed = 0;
    bool bench_exhaustive = false, bench_canonical = false;
    std::string bench_out = "bench.csv";
    bench->add_option("instances", bench_files, "Instance files");
    bench->add_option("--mode", bench_modes, "Modes to run (repeatable)");
    bench->add_option("--time-limit", bench_limit, "Seconds per query");
    bench->add_option("--jobs", bench_jobs, "Parallel queries");
    bench->add_option("--seed", bench_seed, "Random seed");
    bench->add_option("--cell-size", bench_cell, "Resolution divisor: cell = r / this");
    bench->add_flag("--exhaustive", bench_exhaustive, "Exhaust perturbations depth by depth");
    bench->add_flag("--canonical", bench_canonical, "Write time_s as 0 for byte-stable output");
    bench->add_option("-o,--out", bench_out, "Output CSV file");

    // viz
    auto* viz = app.add_subcommand("viz", "Render an instance (and solution) to SVG");
    std::string viz_instance, viz_solution, viz_out = "out.svg";
    double viz_cell = 10.0;
    bool no_regions = false, no_poses = false, no_paths = false;
    viz->add_option("instance", viz_instance, "Instance file")->required();
    viz->add_option("--solution", viz_solution, "Solution file to overlay");
    viz->add_option("--cell-size", viz_cell, "Resolution divisor: cell = r / this");
    viz->add_flag("--no-regions", no_regions, "Skip the region layer");
    viz->add_flag("--no-poses", no_poses, "Skip pose markers");
    viz->add_flag("--no-paths", no_paths, "Skip solution polylines");
    viz->add_option("-o,--out", viz_out, "Output SVG file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_gen(gen_n, gen_density, gen_w, gen_h, gen_seed,
                           gen_buffers < 0 ? gen_n : gen_buffers, gen_out);
        }

        if (solve->parsed()) {
            const bool needs_buffers = solve_mode != "monotone" && solve_mode != "mrs";
            Instance inst = load_instance(solve_instance);
            if (needs_buffers) inst = with_buffers(std::move(inst), solve_seed);
            const RegionGraph g = build_graph(inst, solve_cell);
            if (solve_limit <= 0) solve_limit = solve_mode == "monotone" ? 500.0 : 300.0;
            const SolveOutcome out = run_mode(inst, g, solve_mode, solve_limit, solve_seed,
                                              solve_exhaustive, pert_object, pert_buffer,
                                              max_visits);
            char line[160];
            std::snprintf(line, sizeof(line), "solved=%s actions=%d buffers=%d time_s=%.3f\n",
                          out.solved ? "true" : "false",
                          out.solution ? out.solution->num_actions : -1,
                          out.solution ? out.solution->num_buffers : -1, out.time_s);
            std::cout << line;
            if (out.solved && !solve_out.empty()) {
                Solution sol = *out.solution;
                if (solve_canonical) sol.time_s = 0.0;
                save_solution(sol, solve_out);
            }
            if (!out.solved) return out.timeout ? kExitTimeout : kExitInfeasible;
            return kExitOk;
        }

        if (bench->parsed()) {
            return cmd_bench(bench_files, bench_modes, bench_limit, bench_jobs, bench_seed,
                             bench_exhaustive, bench_canonical, bench_cell, bench_out);
        }

        if (viz->parsed()) {
            const Instance inst = load_instance(viz_instance);
            const RegionGraph g = build_graph(inst, viz_cell);
            Solution sol;
            const Solution* sol_ptr = nullptr;
            if (!viz_solution.empty()) {
                sol = load_solution(viz_solution);
                for (const SolutionAction& a : sol.actions)
                    if (a.object < 0 || a.object >= inst.n) {
                        std::cerr << "solution references object " << a.object
                                  << " absent from the instance\n";
                        return kExitInputMismatch;
                    }
                sol_ptr = &sol;
            }
            SvgLayers layers{!no_regions, !no_poses, !no_paths};
            std::ofstream out(viz_out, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write " << viz_out << "\n";
                return 1;
            }
            out << render_svg(inst, g, sol_ptr, layers);
            std::cout << "wrote " << viz_out << "\n";
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInputMismatch;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitInputMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}

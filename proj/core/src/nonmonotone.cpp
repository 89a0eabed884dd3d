#include "discplan/nonmonotone.hpp"

#include <algorithm>
#include <chrono>

namespace discplan {

std::string SearchTree::encode(const Arrangement& arr) {
    std::string out;
    out.reserve(arr.modes.size() * 3);
    for (const Mode& m : arr.modes) {
        out.push_back(static_cast<char>(m.kind));
        if (m.kind == Mode::AtParked) {
            out.push_back(static_cast<char>(m.parked_at.kind));
            out.push_back(static_cast<char>(
                (m.parked_at.kind == PoseKind::Buffer ? m.parked_at.buffer_id
                                                      : m.parked_at.object) + 1));
        } else {
            out.push_back(0);
            out.push_back(0);
        }
    }
    return out;
}

int SearchTree::init(const Arrangement& root) {
    nodes.clear();
    supers.clear();
    dedup_.clear();
    SearchNode node;
    node.arrangement = root;
    node.super_node = 0;
    nodes.push_back(std::move(node));
    SuperNode sn;
    sn.id = 0;
    sn.root_node = 0;
    sn.perturbation_count = 0;
    sn.objects_at_goal = root.num_at_goal();
    sn.members.push_back(0);
    supers.push_back(std::move(sn));
    dedup_[encode(root)] = 0;
    return 0;
}

int SearchTree::find(const Arrangement& arr) const {
    auto it = dedup_.find(encode(arr));
    return it == dedup_.end() ? -1 : it->second;
}

int SearchTree::add_node(const Arrangement& arr, int parent, int moved_object, PoseLabel from,
                         PoseLabel to, Walk walk, bool is_perturbation) {
    const int index = static_cast<int>(nodes.size());
    SearchNode node;
    node.arrangement = arr;
    node.parent = parent;
    node.moved_object = moved_object;
    node.from_label = from;
    node.to_label = to;
    node.walk = std::move(walk);
    if (is_perturbation) {
        SuperNode sn;
        sn.id = static_cast<int>(supers.size());
        sn.root_node = index;
        sn.perturbation_count = supers[nodes[parent].super_node].perturbation_count + 1;
        sn.objects_at_goal = arr.num_at_goal();
        sn.members.push_back(index);
        node.super_node = sn.id;
        supers.push_back(std::move(sn));
    } else {
        node.super_node = nodes[parent].super_node;
        supers[node.super_node].members.push_back(index);
    }
    nodes.push_back(std::move(node));
    dedup_[encode(arr)] = index;
    return index;
}

int SearchTree::best_objects_at_goal() const {
    int best = 0;
    for (const SearchNode& node : nodes)
        best = std::max(best, node.arrangement.num_at_goal());
    return best;
}

MonotoneTree edfs_dp(const Instance& inst, const RegionGraph& g, const Arrangement& from,
                     const Arrangement& to, const Perturbation& pert, PathDictionary& dict,
                     Deadline deadline, SolverCounters* counters) {
    for (const Mode& m : to.modes)
        if (m.kind != Mode::AtGoal)
            throw std::invalid_argument("edfs_dp: target must be the all-goals arrangement");
    if (pert.buffer.kind == PoseKind::Goal && pert.buffer.object == pert.object)
        throw std::invalid_argument("edfs_dp: an object's own goal is not a buffer");
    const Arrangement base = normalize_arrangement(inst, from);
    if (base.modes[pert.object].kind == Mode::AtGoal)
        throw std::invalid_argument("edfs_dp: perturbed object is already at its goal");
    for (int j = 0; j < inst.n; ++j)
        if (base.label_of(j) == pert.buffer)
            throw BufferOccupied("edfs_dp: buffer pose occupied in the start arrangement");
    if (counters) ++counters->edfs_calls;
    return local_plan(inst, g, base, PerturbationSpec{pert.object, pert.buffer}, dict, deadline,
                      counters);
}

std::vector<int> rank_perturbation_objects(const Instance& inst, const Arrangement& current) {
    std::vector<int> pending;
    for (int i = 0; i < inst.n; ++i)
        if (current.modes[i].kind != Mode::AtGoal) pending.push_back(i);

    // Dependency degrees over the pending objects: 1(j,i) iff o_i's current
    // disc overlaps o_j's goal disc.
    std::vector<int> score(inst.n, 0);
    for (int i : pending) {
        const Vec2 pi = current.position_of(inst, i);
        for (int j : pending) {
            if (i == j) continue;
            if (discs_collide(pi, inst.goals[j], inst.radius)) {
                ++score[i];  // inner degree: i constrains j
                ++score[j];  // outer degree: j is constrained by i
            }
        }
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [&](int a, int b) { return score[a] > score[b]; });
    return pending;
}

std::vector<Vec2> generate_candidate_buffers(const Instance& inst, int count,
                                             int samples_per_slot, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("generate_candidate_buffers: count must be >= 1");
    // Domain-separated stream: the same seed is routinely shared with the
    // instance generator, and replaying its sample sequence would place
    // buffers exactly onto start/goal poses.
    SplitMix64 rng(seed ^ 0xbf58476d1ce4e5b9ull);
    const double r = inst.radius;
    const Workspace& ws = inst.workspace;

    std::vector<Vec2> obstacles;
    obstacles.insert(obstacles.end(), inst.starts.begin(), inst.starts.end());
    obstacles.insert(obstacles.end(), inst.goals.begin(), inst.goals.end());

    std::vector<Vec2> chosen;
    for (int slot = 0; slot < count; ++slot) {
        Vec2 best{};
        int best_score = -1;
        for (int s = 0; s < samples_per_slot; ++s) {
            const Vec2 p{rng.next_in(r, ws.width - r), rng.next_in(r, ws.height - r)};
            int sc = 0;
            for (const Vec2& q : obstacles) sc += discs_collide(p, q, r);
            for (const Vec2& q : chosen) sc += discs_collide(p, q, r);
            if (best_score < 0 || sc < best_score) {
                best_score = sc;
                best = p;
            }
        }
        chosen.push_back(best);
    }
    return chosen;
}

std::vector<PoseLabel> rank_buffers(const Instance& inst, const RegionGraph& g,
                                    const Arrangement& current, int object,
                                    const SearchConfig& config) {
    std::vector<PoseLabel> occupied_by;
    occupied_by.reserve(inst.n);
    for (int j = 0; j < inst.n; ++j) occupied_by.push_back(current.label_of(j));
    auto pose_occupied = [&](PoseLabel label) {
        return std::find(occupied_by.begin(), occupied_by.end(), label) != occupied_by.end();
    };

    std::vector<PoseLabel> out;
    std::vector<PoseLabel> screened_out;  // colliding candidates, exhaustive-mode tail

    // Tier 1: candidate buffers not colliding with any start or goal,
    // reachable from the object's current pose (pre-filter skipped in
    // exhaustive mode; edfs_dp checks reachability exactly anyway).
    const LabelSet occ = occupied_labels(inst, current, object);
    for (size_t k = 0; k < inst.buffers.size(); ++k) {
        const PoseLabel label = PoseLabel::buffer(static_cast<int>(k));
        if (pose_occupied(label)) continue;
        bool clean = true;
        for (const Vec2& q : inst.starts)
            if (discs_collide(inst.buffers[k], q, inst.radius)) clean = false;
        for (const Vec2& q : inst.goals)
            if (discs_collide(inst.buffers[k], q, inst.radius)) clean = false;
        if (!clean) {
            if (config.exhaustive) screened_out.push_back(label);
            continue;
        }
        if (!config.exhaustive &&
            !rg_dfs(g, object, current.label_of(object), label, occ))
            continue;
        out.push_back(label);
    }

    // Tier 2: start poses of objects already at goal.
    for (int j = 0; j < inst.n; ++j) {
        if (j == object || current.modes[j].kind != Mode::AtGoal) continue;
        const PoseLabel label = PoseLabel::start(j);
        if (!pose_occupied(label)) out.push_back(label);
    }

    // Tier 3: goal poses unoccupied in the current arrangement, never the
    // object's own goal (moving there is a goal action, not a perturbation).
    for (int j = 0; j < inst.n; ++j) {
        if (j == object) continue;
        const PoseLabel label = PoseLabel::goal(j);
        if (!pose_occupied(label)) out.push_back(label);
    }

    if (config.exhaustive) {
        out.insert(out.end(), screened_out.begin(), screened_out.end());
    } else if (static_cast<int>(out.size()) > config.max_buffers_per_object) {
        out.resize(config.max_buffers_per_object);
    }
    return out;
}

int select_expansion_node(const SearchTree& tree) {
    int best = -1;
    for (const SuperNode& sn : tree.supers) {
        if (sn.expanded) continue;
        if (best < 0) {
            best = sn.id;
            continue;
        }
        const SuperNode& cur = tree.supers[best];
        if (sn.perturbation_count < cur.perturbation_count ||
            (sn.perturbation_count == cur.perturbation_count &&
             sn.objects_at_goal > cur.objects_at_goal))
            best = sn.id;
    }
    return best;
}

namespace {

struct SearchDriver {
    const Instance& inst;
    const RegionGraph& g;
    const SearchConfig& config;
    SelectionPolicy policy;
    Deadline deadline;
    PathDictionary dict;
    SearchTree tree;
    SolverCounters counters;
    SplitMix64 rng;

    // Per-node perturbation queue, materialized on first touch; the cursor
    // separates tried from untried. Items pack (object, label bit). `full`
    // marks queues built without the heuristic caps.
    struct PertQueue {
        std::vector<uint32_t> items;
        size_t cursor = 0;
        bool materialized = false;
        bool full = false;
        bool exhausted() const { return materialized && cursor >= items.size(); }
    };
    std::unordered_map<int, PertQueue> queues;

    explicit SearchDriver(const Instance& i, const RegionGraph& graph, const SearchConfig& cfg,
                          SelectionPolicy pol)
        : inst(i), g(graph), config(cfg), policy(pol),
          deadline(Deadline::after_seconds(cfg.time_limit_s)), rng(cfg.seed) {}

    uint32_t pack(const Perturbation& p) const {
        return (static_cast<uint32_t>(p.object) << 16) |
               static_cast<uint32_t>(inst.label_bit(p.buffer));
    }
    Perturbation unpack(uint32_t item) const {
        return {static_cast<int>(item >> 16), inst.label_of_bit(item & 0xffff)};
    }

    PertQueue& queue_of(int node) {
        PertQueue& q = queues[node];
        if (q.materialized) return q;
        q.materialized = true;
        const Arrangement arr = tree.nodes[node].arrangement;
        if (policy == SelectionPolicy::Random) {
            // full unranked pool, uniformly shuffled
            SearchConfig full = config;
            full.exhaustive = true;
            for (int object = 0; object < inst.n; ++object) {
                if (arr.modes[object].kind == Mode::AtGoal) continue;
                for (PoseLabel buffer : rank_buffers(inst, g, arr, object, full))
                    q.items.push_back(pack({object, buffer}));
            }
            for (size_t i = q.items.size(); i > 1; --i)
                std::swap(q.items[i - 1], q.items[rng.next_below(i)]);
            q.full = true;
        } else {
            std::vector<int> objects = rank_perturbation_objects(inst, arr);
            if (!config.exhaustive &&
                static_cast<int>(objects.size()) > config.max_objects_per_node)
                objects.resize(config.max_objects_per_node);
            for (int object : objects)
                for (PoseLabel buffer : rank_buffers(inst, g, arr, object, config))
                    q.items.push_back(pack({object, buffer}));
            q.full = config.exhaustive;
        }
        return q;
    }

    // Random-fallback widening: rebuild a capped queue without the caps,
    // keeping already-tried items out so nothing runs twice. The fallback
    // never permanently excludes a (node, object, buffer) triple.
    void widen_queue(int node) {
        PertQueue& q = queues[node];
        SearchConfig full = config;
        full.exhaustive = true;
        const Arrangement arr = tree.nodes[node].arrangement;
        std::vector<uint32_t> tried(q.items.begin(), q.items.begin() + q.cursor);
        std::sort(tried.begin(), tried.end());
        std::vector<uint32_t> items;
        for (int object : rank_perturbation_objects(inst, arr))
            for (PoseLabel buffer : rank_buffers(inst, g, arr, object, full)) {
                const uint32_t item = pack({object, buffer});
                if (!std::binary_search(tried.begin(), tried.end(), item))
                    items.push_back(item);
            }
        q.items = std::move(items);
        q.cursor = 0;
        q.full = true;
    }

    // Folds a local-planner tree into the global search tree; returns the
    // global index of the local target when it was reached, else -1.
    int integrate(const MonotoneTree& local, int base_node) {
        std::unordered_map<ArrangementKey, int> mapping;
        mapping[local.root_key] = base_node;
        int target_index = -1;
        for (ArrangementKey key : local.insertion_order) {
            const TreeNode& rec = local.nodes.at(key);
            const Arrangement arr = local.decode(key);
            int index = tree.find(arr);
            if (index < 0) {
                const int parent = mapping.at(rec.parent);
                const bool is_pert = local.perturbation &&
                                     rec.moved_object == local.perturbation->object &&
                                     rec.to == local.perturbation->buffer;
                index = tree.add_node(arr, parent, rec.moved_object, rec.from, rec.to, rec.walk,
                                      is_pert);
            }
            mapping[key] = index;
            if (local.reached && key == local.target_key) target_index = index;
        }
        return target_index;
    }

    Solution extract(int node_index) const {
        std::vector<const SearchNode*> chain;
        for (int cur = node_index; tree.nodes[cur].parent >= 0; cur = tree.nodes[cur].parent)
            chain.push_back(&tree.nodes[cur]);
        std::reverse(chain.begin(), chain.end());
        Solution sol;
        for (const SearchNode* node : chain) {
            SolutionAction action;
            action.object = node->moved_object;
            action.kind = node->to_label == PoseLabel::goal(node->moved_object)
                              ? ActionKind::ToGoal
                              : ActionKind::ToBuffer;
            action.from = inst.label_position(node->from_label);
            action.to = inst.label_position(node->to_label);
            action.walk = node->walk;
            action.polyline = walk_to_curve(g, node->walk, action.from, action.to);
            if (action.kind == ActionKind::ToBuffer) ++sol.num_buffers;
            sol.actions.push_back(std::move(action));
        }
        sol.num_actions = static_cast<int>(sol.actions.size());
        sol.seed = config.seed;
        return sol;
    }

    // Runs one perturbation from `node`; returns the solved global node or -1.
    int attempt(int node, const Perturbation& pert) {
        const int sn = tree.nodes[node].super_node;
        if (tree.supers[sn].root_node == node)
            tree.supers[sn].tried_perturbations.push_back(pert);
        MonotoneTree local;
        try {
            local = edfs_dp(inst, g, tree.nodes[node].arrangement, Arrangement::all_goal(inst.n),
                            pert, dict, deadline, &counters);
        } catch (const BufferOccupied&) {
            return -1;
        } catch (const std::invalid_argument&) {
            // degenerate: the node's parked pose normalizes onto a goal
            return -1;
        }
        return integrate(local, node);
    }

    // Perturbation batch for one node (Alg. lines: rank objects, rank
    // buffers, run the local planner per pair), resuming at the cursor.
    int run_batch(int node) {
        while (true) {
            if (deadline.expired() || tree.nodes.size() >= config.max_tree_nodes) return -1;
            PertQueue& q = queue_of(node);
            if (q.cursor >= q.items.size()) return -1;
            const Perturbation pert = unpack(q.items[q.cursor++]);
            const int solved = attempt(node, pert);
            if (solved >= 0) return solved;
        }
    }

    InformedResult run() {
        const auto t0 = std::chrono::steady_clock::now();
        InformedResult result;
        auto finish = [&](SearchStatus status, std::optional<Solution> sol) {
            result.status = status;
            result.solution = std::move(sol);
            result.best_at_goal = tree.best_objects_at_goal();
            result.counters = counters;
            result.wall_time_s = std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - t0).count();
            if (result.solution) result.solution->time_s = result.wall_time_s;
            result.tree = std::move(tree);
            return result;
        };

        const Arrangement initial = normalize_arrangement(inst, Arrangement::all_start(inst.n));
        tree.init(initial);
        if (initial.num_at_goal() == inst.n) return finish(SearchStatus::Solved, extract(0));

        // Initial monotone attempt.
        MonotoneTree mono = local_plan(inst, g, initial, std::nullopt, dict, deadline, &counters);
        const int solved_index = integrate(mono, 0);
        if (solved_index >= 0) return finish(SearchStatus::Solved, extract(solved_index));
        if (deadline.expired()) return finish(SearchStatus::DeadlineExceeded, std::nullopt);

        if (policy == SelectionPolicy::Informed) {
            std::vector<int> fallback_nodes;
            size_t fallback_known = 0;  // tree nodes already offered to the fallback pool
            while (true) {
                if (deadline.expired()) return finish(SearchStatus::DeadlineExceeded, std::nullopt);
                if (tree.nodes.size() >= config.max_tree_nodes)
                    return finish(SearchStatus::NodeLimit, std::nullopt);
                const int sid = select_expansion_node(tree);
                int node = -1;
                if (sid >= 0) {
                    node = tree.supers[sid].root_node;
                } else {
                    // Random fallback over all tree nodes with untried
                    // perturbations, widening capped queues to the full pool;
                    // exhaustion here is definitive.
                    for (; fallback_known < tree.nodes.size(); ++fallback_known)
                        fallback_nodes.push_back(static_cast<int>(fallback_known));
                    while (!fallback_nodes.empty() && node < 0) {
                        const size_t pick = rng.next_below(fallback_nodes.size());
                        PertQueue& q = queue_of(fallback_nodes[pick]);
                        if (q.exhausted() && !q.full) widen_queue(fallback_nodes[pick]);
                        if (q.exhausted()) {
                            fallback_nodes.erase(fallback_nodes.begin() + pick);
                        } else {
                            node = fallback_nodes[pick];
                        }
                    }
                    if (node < 0) return finish(SearchStatus::Exhausted, std::nullopt);
                }
                const int solved = run_batch(node);
                if (solved >= 0) return finish(SearchStatus::Solved, extract(solved));
                if (deadline.expired()) return finish(SearchStatus::DeadlineExceeded, std::nullopt);
                if (sid >= 0 && queue_of(node).exhausted()) tree.supers[sid].expanded = true;
            }
        }

        // Random policy: uniformly pick a super-node root and one untried
        // perturbation at a time; fall back to arbitrary nodes once all roots
        // are exhausted.
        std::vector<int> candidates{0};
        size_t known_supers = 1;
        size_t known_nodes = 0;
        bool widened = false;
        while (true) {
            if (deadline.expired()) return finish(SearchStatus::DeadlineExceeded, std::nullopt);
            if (tree.nodes.size() >= config.max_tree_nodes)
                return finish(SearchStatus::NodeLimit, std::nullopt);
            if (!widened) {
                for (; known_supers < tree.supers.size(); ++known_supers)
                    candidates.push_back(tree.supers[known_supers].root_node);
            } else {
                for (; known_nodes < tree.nodes.size(); ++known_nodes)
                    candidates.push_back(static_cast<int>(known_nodes));
            }
            if (candidates.empty()) {
                if (widened) return finish(SearchStatus::Exhausted, std::nullopt);
                widened = true;  // roots exhausted: widen the pool to every node
                continue;
            }
            const size_t pick = rng.next_below(candidates.size());
            const int node = candidates[pick];
            PertQueue& q = queue_of(node);
            if (q.cursor >= q.items.size()) {
                candidates.erase(candidates.begin() + pick);
                continue;
            }
            const Perturbation pert = unpack(q.items[q.cursor++]);
            const int solved = attempt(node, pert);
            if (solved >= 0) return finish(SearchStatus::Solved, extract(solved));
        }
    }
};

}  // namespace

InformedResult arrangement_space_search(const Instance& inst, const RegionGraph& g,
                                        const SearchConfig& config, SelectionPolicy policy) {
    SearchDriver driver(inst, g, config, policy);
    return driver.run();
}

InformedResult informed_search(const Instance& inst, const RegionGraph& g,
                               const SearchConfig& config) {
    return arrangement_space_search(inst, g, config, SelectionPolicy::Informed);
}

}  // namespace discplan

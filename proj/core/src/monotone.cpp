#include "discplan/monotone.hpp"

#include <algorithm>

namespace discplan {

namespace {

constexpr ArrangementKey kStageShift = 32;

ArrangementKey make_key(uint32_t mask, int stage) {
    return static_cast<ArrangementKey>(mask) | (static_cast<ArrangementKey>(stage) << kStageShift);
}
uint32_t key_mask(ArrangementKey key) { return static_cast<uint32_t>(key & 0xffffffffu); }
int key_stage(ArrangementKey key) { return static_cast<int>(key >> kStageShift); }

}  // namespace

std::optional<Walk> PathDictionary::lookup_or_search(const RegionGraph& g, int moving_object,
                                                     PoseLabel from, PoseLabel to,
                                                     const LabelSet& occupied,
                                                     SolverCounters& counters) {
    const Key key{moving_object, g.label_bit(from), g.label_bit(to)};
    if (key.from_bit < 0 || key.to_bit < 0)
        throw UnmappedPose("lookup_or_search: pose label not in the decomposition");

    if (enabled) {
        auto it = walks_.find(key);
        if (it != walks_.end()) {
            for (const Walk& w : it->second) {
                if (!w.interference.intersects(occupied)) {
                    ++counters.dict_hits;
                    return w;
                }
            }
        }
    }

    ++counters.rg_dfs_calls;
    std::optional<Walk> walk = rg_dfs(g, moving_object, from, to, occupied);
    if (walk && enabled) {
        walks_[key].push_back(*walk);
        ++total_walks_;
        ++counters.walks_stored;
    }
    return walk;
}

Arrangement normalize_arrangement(const Instance& inst, const Arrangement& arr) {
    Arrangement out = arr;
    for (int i = 0; i < inst.n; ++i)
        if (out.modes[i].kind != Mode::AtGoal &&
            out.position_of(inst, i) == inst.goals[i])
            out.modes[i] = Mode::at_goal();
    return out;
}

LabelSet occupied_labels(const Instance& inst, const Arrangement& arr, int moving_object) {
    LabelSet occupied(inst.num_labels());
    for (int j = 0; j < inst.n; ++j) {
        if (j == moving_object) continue;
        occupied.set(inst.label_bit(arr.label_of(j)));
    }
    return occupied;
}

Arrangement MonotoneTree::decode(ArrangementKey key) const {
    const uint32_t mask = key_mask(key);
    const int stage = key_stage(key);
    Arrangement arr = base;
    for (size_t i = 0; i < arr.modes.size(); ++i)
        if (mask & (uint32_t{1} << i)) arr.modes[i] = Mode::at_goal();
    if (perturbation) {
        if (stage == 1) arr.modes[perturbation->object] = Mode::at_parked(perturbation->buffer);
        if (stage == 2) arr.modes[perturbation->object] = Mode::at_goal();
    }
    return arr;
}

namespace {

struct PlanContext {
    const Instance& inst;
    const RegionGraph& g;
    PathDictionary& dict;
    Deadline deadline;
    SolverCounters& counters;
    MonotoneTree& tree;
    std::vector<int> movers;  // objects not at goal in the base, excluding the perturbed one
    uint32_t full_mask = 0;

    PoseLabel base_label(int object) const { return tree.base.label_of(object); }

    // Current pose label of `object` in the arrangement encoded by `key`.
    PoseLabel label_at(ArrangementKey key, int object) const {
        if (tree.perturbation && object == tree.perturbation->object) {
            switch (key_stage(key)) {
                case 1: return tree.perturbation->buffer;
                case 2: return PoseLabel::goal(object);
                default: return base_label(object);
            }
        }
        if (key_mask(key) & (uint32_t{1} << object)) return PoseLabel::goal(object);
        return base_label(object);
    }

    LabelSet occupied_at(ArrangementKey key, int moving_object) const {
        LabelSet occupied(inst.num_labels());
        for (int j = 0; j < inst.n; ++j) {
            if (j == moving_object) continue;
            occupied.set(inst.label_bit(label_at(key, j)));
        }
        return occupied;
    }

    // Feasibility of the decoded destination arrangement is exact geometry,
    // independent of the raster: placing the object may not overlap anyone.
    bool placement_feasible(ArrangementKey key, int object, PoseLabel to_label) const {
        const Vec2 target = inst.label_position(to_label);
        for (int j = 0; j < inst.n; ++j) {
            if (j == object) continue;
            if (discs_collide(target, inst.label_position(label_at(key, j)), inst.radius))
                return false;
        }
        return true;
    }

    bool try_move(ArrangementKey from_key, int object, PoseLabel to_label, ArrangementKey to_key) {
        if (tree.contains(to_key)) return false;
        ++counters.probes;
        if (!placement_feasible(from_key, object, to_label)) return false;
        const PoseLabel from_label = label_at(from_key, object);
        std::optional<Walk> walk =
            dict.lookup_or_search(g, object, from_label, to_label, occupied_at(from_key, object),
                                  counters);
        if (!walk) return false;
        tree.nodes.emplace(to_key, TreeNode{from_key, object, from_label, to_label, std::move(*walk)});
        tree.insertion_order.push_back(to_key);
        return true;
    }

    // Depth-first recursion; returns true once the target key is in the tree.
    bool dfs(ArrangementKey key) {
        ++counters.nodes_expanded;
        if (deadline.expired()) {
            tree.deadline_hit = true;
            return false;
        }
        const int stage = key_stage(key);
        for (int object = 0; object < inst.n; ++object) {
            ArrangementKey next = 0;
            PoseLabel to_label;
            if (tree.perturbation && object == tree.perturbation->object) {
                if (stage == 0) {
                    to_label = tree.perturbation->buffer;
                    next = make_key(key_mask(key), 1);
                } else if (stage == 1) {
                    to_label = PoseLabel::goal(object);
                    next = make_key(key_mask(key), 2);
                } else {
                    continue;
                }
            } else {
                const uint32_t bit = uint32_t{1} << object;
                if (!(full_mask & bit) || (key_mask(key) & bit)) continue;
                to_label = PoseLabel::goal(object);
                next = make_key(key_mask(key) | bit, stage);
            }
            if (!try_move(key, object, to_label, next)) continue;
            if (next == tree.target_key) {
                tree.reached = true;
                return true;
            }
            if (dfs(next)) return true;
            if (tree.deadline_hit) return false;
        }
        return false;
    }
};

}  // namespace

MonotoneTree local_plan(const Instance& inst, const RegionGraph& g, const Arrangement& from,
                        std::optional<PerturbationSpec> perturbation, PathDictionary& dict,
                        Deadline deadline, SolverCounters* counters) {
    if (static_cast<int>(from.modes.size()) != inst.n)
        throw std::invalid_argument("local_plan: arrangement size does not match instance");

    MonotoneTree tree;
    tree.base = normalize_arrangement(inst, from);
    tree.perturbation = perturbation;

    SolverCounters local_counters;
    SolverCounters& ctrs = counters ? *counters : local_counters;
    PlanContext ctx{inst, g, dict, deadline, ctrs, tree, {}, 0};

    for (int i = 0; i < inst.n; ++i) {
        if (perturbation && i == perturbation->object) continue;
        if (tree.base.modes[i].kind != Mode::AtGoal) {
            ctx.movers.push_back(i);
            ctx.full_mask |= uint32_t{1} << i;
        }
    }
    tree.root_key = make_key(0, 0);
    tree.target_key = make_key(ctx.full_mask, perturbation ? 2 : 0);

    if (tree.root_key == tree.target_key) {
        tree.reached = true;
        return tree;
    }
    ctx.dfs(tree.root_key);
    return tree;
}

MonotoneTree dfs_dp(const Instance& inst, const RegionGraph& g, const Arrangement& from,
                    const Arrangement& to, PathDictionary& dict, Deadline deadline,
                    SolverCounters* counters) {
    for (const Mode& m : to.modes)
        if (m.kind != Mode::AtGoal)
            throw std::invalid_argument("dfs_dp: target must be the all-goals arrangement");
    return local_plan(inst, g, from, std::nullopt, dict, deadline, counters);
}

Solution extract_solution(const Instance& inst, const RegionGraph& g, const MonotoneTree& tree,
                          ArrangementKey key) {
    if (!tree.contains(key)) throw KeyAbsent("extract_solution: key not present in the tree");

    std::vector<const TreeNode*> chain;
    for (ArrangementKey cur = key; cur != tree.root_key;) {
        const TreeNode& node = tree.nodes.at(cur);
        chain.push_back(&node);
        cur = node.parent;
    }
    std::reverse(chain.begin(), chain.end());

    Solution sol;
    for (const TreeNode* node : chain) {
        SolutionAction action;
        action.object = node->moved_object;
        // A move onto a borrowed goal pose is a parking action, not a goal one.
        action.kind = node->to == PoseLabel::goal(node->moved_object) ? ActionKind::ToGoal
                                                                      : ActionKind::ToBuffer;
        action.from = inst.label_position(node->from);
        action.to = inst.label_position(node->to);
        action.walk = node->walk;
        action.polyline = walk_to_curve(g, node->walk, action.from, action.to);
        sol.actions.push_back(std::move(action));
        if (sol.actions.back().kind == ActionKind::ToBuffer) ++sol.num_buffers;
    }
    sol.num_actions = static_cast<int>(sol.actions.size());
    return sol;
}

}  // namespace discplan

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "discplan/instance.hpp"
#include "discplan/region_graph.hpp"
#include "discplan/solution.hpp"

namespace discplan {

struct KeyAbsent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Deadline {
    std::chrono::steady_clock::time_point at;
    bool unlimited = false;

    static Deadline never() { return {std::chrono::steady_clock::time_point::max(), true}; }
    static Deadline after_seconds(double s) {
        return {std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(s)),
                false};
    }
    bool expired() const { return !unlimited && std::chrono::steady_clock::now() >= at; }
};

struct SolverCounters {
    uint64_t nodes_expanded = 0;  // recursion entries / states popped
    uint64_t probes = 0;          // attempted object moves
    uint64_t rg_dfs_calls = 0;
    uint64_t dict_hits = 0;
    uint64_t walks_stored = 0;
    uint64_t edfs_calls = 0;
};

// Incremental store of object walks found by rg_dfs, keyed by the moved
// object and its from/to pose labels. A stored walk answers a later query
// whenever its swept interference avoids the query's occupancy.
class PathDictionary {
public:
    bool enabled = true;

    std::optional<Walk> lookup_or_search(const RegionGraph& g, int moving_object,
                                         PoseLabel from, PoseLabel to,
                                         const LabelSet& occupied, SolverCounters& counters);

    size_t size() const { return total_walks_; }

private:
    struct Key {
        int object;
        int from_bit;
        int to_bit;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            return std::hash<long long>()((static_cast<long long>(k.object) << 40) ^
                                          (static_cast<long long>(k.from_bit) << 20) ^ k.to_bit);
        }
    };
    std::unordered_map<Key, std::vector<Walk>, KeyHash> walks_;
    size_t total_walks_ = 0;
};

// Key of one arrangement in the local planner's state space: low 32 bits are
// the moved-to-goal mask; bits 32..33 hold the perturbed object's stage
// (0 = at its base pose, 1 = at the buffer, 2 = at its goal).
using ArrangementKey = uint64_t;

struct TreeNode {
    ArrangementKey parent = 0;
    int moved_object = -1;
    PoseLabel from;
    PoseLabel to;
    Walk walk;
};

struct PerturbationSpec {
    int object = -1;
    PoseLabel buffer;
};

// Search tree of one local-planner invocation, rooted at the base
// arrangement. Contains the target key iff the subproblem is solvable.
struct MonotoneTree {
    Arrangement base;  // normalized: objects whose pose equals their goal are AtGoal
    std::optional<PerturbationSpec> perturbation;
    ArrangementKey root_key = 0;
    ArrangementKey target_key = 0;
    bool reached = false;
    bool deadline_hit = false;
    std::unordered_map<ArrangementKey, TreeNode> nodes;  // excludes the root
    std::vector<ArrangementKey> insertion_order;

    bool contains(ArrangementKey key) const {
        return key == root_key || nodes.count(key) > 0;
    }
    size_t node_count() const { return nodes.size() + 1; }

    Arrangement decode(ArrangementKey key) const;
};

// Depth-first dynamic program over the 2^n arrangement space: repeatedly
// moves a not-yet-done object to its goal when a valid walk exists under the
// current occupancy, memoizing reached arrangements. Complete for monotone
// instances. `to` must be the all-goals arrangement.
MonotoneTree dfs_dp(const Instance& inst, const RegionGraph& g, const Arrangement& from,
                    const Arrangement& to, PathDictionary& dict, Deadline deadline,
                    SolverCounters* counters = nullptr);

// Shared engine behind dfs_dp/edfs_dp: with a perturbation, the chosen
// object's motion is split into mandatory base->buffer and buffer->goal
// phases while every other object moves base->goal at most once.
MonotoneTree local_plan(const Instance& inst, const RegionGraph& g, const Arrangement& from,
                        std::optional<PerturbationSpec> perturbation, PathDictionary& dict,
                        Deadline deadline, SolverCounters* counters = nullptr);

// Ordered actions along the tree path from the root to `key`; throws
// KeyAbsent when the key was never reached. Walks are realized as polylines.
Solution extract_solution(const Instance& inst, const RegionGraph& g, const MonotoneTree& tree,
                          ArrangementKey key);

// Occupancy set for a move of `moving_object` out of `arr`: the labels of the
// poses currently held by every other object.
LabelSet occupied_labels(const Instance& inst, const Arrangement& arr, int moving_object);

// Base-arrangement normalization used by all solvers: an object whose current
// position exactly equals its goal position is treated as already at goal.
Arrangement normalize_arrangement(const Instance& inst, const Arrangement& arr);

}  // namespace discplan

#pragma once

#include <optional>

#include "discplan/nonmonotone.hpp"

namespace discplan {

struct BruteForceResult {
    enum class Status { Solved, Infeasible, DeadlineExceeded };
    Status status = Status::Infeasible;
    int min_actions = -1;
    std::optional<Solution> solution;
    uint64_t states_expanded = 0;
};

// Uniform-cost search (breadth-first over action count) on the bounded
// arrangement space where each object occupies its start, its goal, or a
// candidate buffer slot. Any action not ending at the moved object's goal
// counts against max_buffer_visits. Returns a provably minimal-action
// solution within those bounds.
BruteForceResult brute_force_optimal(const Instance& inst, const RegionGraph& g,
                                     int max_buffer_visits, Deadline deadline);

struct MrsResult {
    std::optional<Solution> solution;
    bool deadline_hit = false;
    SolverCounters counters;
};

// Backtracking over object orderings: repeatedly tries to move the next
// unmoved object start->goal under the current occupancy. Complete for
// monotone instances; shares the walk dictionary when one is given.
MrsResult mrs_backtracking(const Instance& inst, const RegionGraph& g, Deadline deadline,
                           PathDictionary* shared_dict = nullptr);

// Ablation baseline: the informed-search loop with expansion node, object,
// and buffer selection replaced by uniform random choices.
InformedResult random_ablation_search(const Instance& inst, const RegionGraph& g,
                                      const SearchConfig& config);

}  // namespace discplan

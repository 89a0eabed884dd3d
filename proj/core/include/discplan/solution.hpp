#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "discplan/instance.hpp"
#include "discplan/region_graph.hpp"

namespace discplan {

enum class ActionKind : uint8_t { ToGoal, ToBuffer };

struct SolutionAction {
    int object = -1;
    ActionKind kind = ActionKind::ToGoal;
    Vec2 from;
    Vec2 to;
    Walk walk;
    std::vector<Vec2> polyline;
};

// Ordered pick-and-place actions transforming the start arrangement into the
// goal arrangement.
struct Solution {
    std::vector<SolutionAction> actions;
    int num_actions = 0;
    int num_buffers = 0;
    double time_s = 0.0;
    uint64_t seed = 0;
};

std::string solution_to_json(const Solution& sol);
Solution solution_from_json(const std::string& text);
void save_solution(const Solution& sol, const std::string& path);
Solution load_solution(const std::string& path);

struct ReplayResult {
    bool ok = false;
    std::string error;  // first violation, empty when ok
};

// Replays a solution action by action against exact disc geometry:
//  - each action must depart from the object's current position,
//  - every swept sample, quantized to its grid cell center, must clear all
//    other objects by >= 2r (the raster guarantee, zero tolerance),
//  - every exact sample must clear them by >= 2r - 0.75*cell (resolution slack),
//  - the final arrangement must equal the goals.
ReplayResult replay_solution(const Instance& inst, const RegionGraph& g, const Solution& sol);

}  // namespace discplan

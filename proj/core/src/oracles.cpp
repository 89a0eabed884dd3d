#include "discplan/oracles.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace discplan {

namespace {

std::string encode_modes(const Arrangement& arr) {
    std::string out;
    out.reserve(arr.modes.size() * 2);
    for (const Mode& m : arr.modes) {
        out.push_back(static_cast<char>(m.kind));
        out.push_back(static_cast<char>(
            (m.kind == Mode::AtParked ? m.parked_at.buffer_id : -1) + 1));
    }
    return out;
}

struct BfsEdge {
    int parent = -1;  // index into the state table
    int object = -1;
    PoseLabel from;
    PoseLabel to;
    Walk walk;
};

}  // namespace

BruteForceResult brute_force_optimal(const Instance& inst, const RegionGraph& g,
                                     int max_buffer_visits, Deadline deadline) {
    BruteForceResult result;
    PathDictionary dict;
    SolverCounters counters;

    struct State {
        Arrangement arr;
        int buffers_used;
        int depth;
        BfsEdge edge;
    };
    std::vector<State> states;
    std::unordered_map<std::string, int> seen;  // key includes the buffer budget used

    auto state_key = [](const Arrangement& arr, int used) {
        return encode_modes(arr) + static_cast<char>(used);
    };

    const Arrangement initial = normalize_arrangement(inst, Arrangement::all_start(inst.n));
    states.push_back({initial, 0, 0, {}});
    seen[state_key(initial, 0)] = 0;

    auto extract = [&](int index) {
        std::vector<int> chain;
        for (int cur = index; states[cur].edge.parent >= 0; cur = states[cur].edge.parent)
            chain.push_back(cur);
        std::reverse(chain.begin(), chain.end());
        Solution sol;
        for (int cur : chain) {
            const BfsEdge& e = states[cur].edge;
            SolutionAction action;
            action.object = e.object;
            action.kind = e.to.kind == PoseKind::Goal && e.to.object == e.object
                              ? ActionKind::ToGoal
                              : ActionKind::ToBuffer;
            action.from = inst.label_position(e.from);
            action.to = inst.label_position(e.to);
            action.walk = e.walk;
            action.polyline = walk_to_curve(g, e.walk, action.from, action.to);
            if (action.kind == ActionKind::ToBuffer) ++sol.num_buffers;
            sol.actions.push_back(std::move(action));
        }
        sol.num_actions = static_cast<int>(sol.actions.size());
        return sol;
    };

    std::deque<int> queue{0};
    while (!queue.empty()) {
        if (deadline.expired()) {
            result.status = BruteForceResult::Status::DeadlineExceeded;
            return result;
        }
        const int index = queue.front();
        queue.pop_front();
        ++result.states_expanded;
        const Arrangement arr = states[index].arr;
        const int used = states[index].buffers_used;
        const int depth = states[index].depth;

        if (arr.num_at_goal() == inst.n) {
            result.status = BruteForceResult::Status::Solved;
            result.min_actions = depth;
            result.solution = extract(index);
            result.solution->seed = 0;
            return result;
        }

        auto occupied_pose = [&](PoseLabel label) {
            for (int j = 0; j < inst.n; ++j)
                if (arr.label_of(j) == label) return true;
            return false;
        };

        for (int object = 0; object < inst.n; ++object) {
            const PoseLabel from = arr.label_of(object);
            std::vector<std::pair<PoseLabel, Mode>> targets;
            if (arr.modes[object].kind != Mode::AtGoal)
                targets.emplace_back(PoseLabel::goal(object), Mode::at_goal());
            if (used < max_buffer_visits) {
                if (arr.modes[object].kind != Mode::AtStart)
                    targets.emplace_back(PoseLabel::start(object), Mode::at_start());
                for (size_t k = 0; k < inst.buffers.size(); ++k) {
                    const PoseLabel bl = PoseLabel::buffer(static_cast<int>(k));
                    if (arr.modes[object] != Mode::at_buffer(static_cast<int>(k)) &&
                        !occupied_pose(bl))
                        targets.emplace_back(bl, Mode::at_buffer(static_cast<int>(k)));
                }
            }
            for (const auto& [to, mode] : targets) {
                const bool is_goal_action = to.kind == PoseKind::Goal && to.object == object;
                Arrangement next = arr;
                next.modes[object] = mode;
                const int next_used = used + (is_goal_action ? 0 : 1);
                const std::string key = state_key(next, next_used);
                if (seen.count(key)) continue;
                if (!arrangement_feasible(next.positions(inst), inst.radius)) continue;
                std::optional<Walk> walk = dict.lookup_or_search(
                    g, object, from, to, occupied_labels(inst, arr, object), counters);
                if (!walk) continue;
                seen[key] = static_cast<int>(states.size());
                states.push_back({next, next_used, depth + 1,
                                  BfsEdge{index, object, from, to, std::move(*walk)}});
                queue.push_back(static_cast<int>(states.size() - 1));
            }
        }
    }
    result.status = BruteForceResult::Status::Infeasible;
    return result;
}

MrsResult mrs_backtracking(const Instance& inst, const RegionGraph& g, Deadline deadline,
                           PathDictionary* shared_dict) {
    MrsResult result;
    PathDictionary local_dict;
    PathDictionary& dict = shared_dict ? *shared_dict : local_dict;

    Arrangement arr = normalize_arrangement(inst, Arrangement::all_start(inst.n));
    std::vector<std::pair<int, Walk>> order;

    // Depth-first over orderings; ascending object index at each level.
    auto rec = [&](auto&& self) -> bool {
        ++result.counters.nodes_expanded;
        if (deadline.expired()) {
            result.deadline_hit = true;
            return false;
        }
        bool all_done = true;
        for (int object = 0; object < inst.n; ++object) {
            if (arr.modes[object].kind == Mode::AtGoal) continue;
            all_done = false;
            ++result.counters.probes;
            bool clash = false;
            for (int j = 0; j < inst.n; ++j)
                if (j != object && discs_collide(inst.goals[object], arr.position_of(inst, j),
                                                 inst.radius))
                    clash = true;
            if (clash) continue;
            std::optional<Walk> walk =
                dict.lookup_or_search(g, object, arr.label_of(object), PoseLabel::goal(object),
                                      occupied_labels(inst, arr, object), result.counters);
            if (!walk) continue;
            const Mode saved = arr.modes[object];
            arr.modes[object] = Mode::at_goal();
            order.emplace_back(object, std::move(*walk));
            if (self(self)) return true;
            if (result.deadline_hit) return false;
            arr.modes[object] = saved;
            order.pop_back();
        }
        return all_done;
    };

    if (!rec(rec)) return result;

    Solution sol;
    Arrangement replay = normalize_arrangement(inst, Arrangement::all_start(inst.n));
    for (auto& [object, walk] : order) {
        SolutionAction action;
        action.object = object;
        action.kind = ActionKind::ToGoal;
        action.from = replay.position_of(inst, object);
        action.to = inst.goals[object];
        action.walk = walk;
        action.polyline = walk_to_curve(g, walk, action.from, action.to);
        replay.modes[object] = Mode::at_goal();
        sol.actions.push_back(std::move(action));
    }
    sol.num_actions = static_cast<int>(sol.actions.size());
    result.solution = std::move(sol);
    return result;
}

InformedResult random_ablation_search(const Instance& inst, const RegionGraph& g,
                                      const SearchConfig& config) {
    return arrangement_space_search(inst, g, config, SelectionPolicy::Random);
}

}  // namespace discplan

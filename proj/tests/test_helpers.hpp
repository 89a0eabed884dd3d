#pragma once

// Test-only oracles, independent of the region-graph machinery they check:
// cell labeling by direct distance tests, flood-fill connectivity, and
// cell-quantized dense sampling along polylines.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "discplan/instance.hpp"
#include "discplan/nonmonotone.hpp"
#include "discplan/region_graph.hpp"

namespace discplan::testing {

// Per-cell interference sets recomputed from scratch: locate the cell center
// arithmetically and run the pairwise distance test against every pose.
inline std::vector<LabelSet> oracle_cell_sets(const Grid& grid,
                                              const std::vector<std::pair<PoseLabel, Vec2>>& poses,
                                              double r) {
    std::vector<LabelSet> sets(grid.num_cells(), LabelSet(static_cast<int>(poses.size())));
    for (int cy = 0; cy < grid.rows; ++cy)
        for (int cx = 0; cx < grid.cols; ++cx) {
            const Vec2 c{grid.origin_x + (cx + 0.5) * grid.cell_w,
                         grid.origin_y + (cy + 0.5) * grid.cell_h};
            LabelSet& s = sets[grid.cell_index(cx, cy)];
            for (size_t b = 0; b < poses.size(); ++b) {
                const double dx = c.x - poses[b].second.x;
                const double dy = c.y - poses[b].second.y;
                if (dx * dx + dy * dy < 4.0 * r * r) s.set(static_cast<int>(b));
            }
        }
    return sets;
}

// 4-connected components over cells with identical sets; returns the
// component id per cell (ids assigned in scan order).
inline std::vector<int> oracle_components(const Grid& grid, const std::vector<LabelSet>& sets) {
    std::vector<int> comp(grid.num_cells(), -1);
    int next = 0;
    std::vector<int> stack;
    for (int cell = 0; cell < grid.num_cells(); ++cell) {
        if (comp[cell] >= 0) continue;
        const int id = next++;
        comp[cell] = id;
        stack.assign(1, cell);
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            const int cx = cur % grid.cols;
            const int cy = cur / grid.cols;
            const int nbs[4] = {cx > 0 ? cur - 1 : -1, cx + 1 < grid.cols ? cur + 1 : -1,
                                cy > 0 ? cur - grid.cols : -1,
                                cy + 1 < grid.rows ? cur + grid.cols : -1};
            for (int nb : nbs) {
                if (nb < 0 || comp[nb] >= 0 || !(sets[nb] == sets[cur])) continue;
                comp[nb] = id;
                stack.push_back(nb);
            }
        }
    }
    return comp;
}

// Flood fill over traversable cells (set disjoint from `occupied`); true when
// the two cells are connected.
inline bool oracle_cells_connected(const Grid& grid, const std::vector<LabelSet>& sets,
                                   const LabelSet& occupied, int from_cell, int to_cell) {
    if (sets[from_cell].intersects(occupied) || sets[to_cell].intersects(occupied)) return false;
    std::vector<char> seen(grid.num_cells(), 0);
    std::vector<int> stack{from_cell};
    seen[from_cell] = 1;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        if (cur == to_cell) return true;
        const int cx = cur % grid.cols;
        const int cy = cur / grid.cols;
        const int nbs[4] = {cx > 0 ? cur - 1 : -1, cx + 1 < grid.cols ? cur + 1 : -1,
                            cy > 0 ? cur - grid.cols : -1,
                            cy + 1 < grid.rows ? cur + grid.cols : -1};
        for (int nb : nbs) {
            if (nb < 0 || seen[nb] || sets[nb].intersects(occupied)) continue;
            seen[nb] = 1;
            stack.push_back(nb);
        }
    }
    return false;
}

// Union of exact interference at the cell centers touched by half-cell-step
// samples of the polyline (the sampling rule curve_to_walk documents).
inline LabelSet oracle_dense_interference(const Grid& grid,
                                          const std::vector<std::pair<PoseLabel, Vec2>>& poses,
                                          double r, const std::vector<Vec2>& polyline) {
    LabelSet out(static_cast<int>(poses.size()));
    const double step = grid.sample_step();
    auto absorb = [&](Vec2 p) {
        const Vec2 c = grid.cell_center(grid.cell_of(p));
        for (size_t b = 0; b < poses.size(); ++b)
            if (discs_collide(c, poses[b].second, r)) out.set(static_cast<int>(b));
    };
    absorb(polyline.front());
    for (size_t i = 0; i + 1 < polyline.size(); ++i) {
        const Vec2 a = polyline[i];
        const Vec2 b = polyline[i + 1];
        const double len = distance(a, b);
        const int samples = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int s = 1; s <= samples; ++s) {
            const double t = static_cast<double>(s) / samples;
            absorb({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

// Hand-built instance fixture.
inline Instance make_instance(Workspace ws, double r, std::vector<Vec2> starts,
                              std::vector<Vec2> goals, std::vector<Vec2> buffers = {}) {
    Instance inst;
    inst.workspace = ws;
    inst.radius = r;
    inst.n = static_cast<int>(starts.size());
    inst.starts = std::move(starts);
    inst.goals = std::move(goals);
    inst.buffers = std::move(buffers);
    inst.validate();
    return inst;
}

// Offset position-swap pair around (cx, cy): the classic non-monotone core.
// Each goal overlaps the other object's start by 0.3r (blocking it), while
// start-start and goal-goal clearances stay at 2.3r and every margin is at
// least three grid cells, keeping the fixture stable across resolutions.
inline void add_swap_pair(std::vector<Vec2>& starts, std::vector<Vec2>& goals, double cx,
                          double cy, double r) {
    starts.push_back({cx - 1.15 * r, cy});
    starts.push_back({cx + 1.15 * r, cy});
    goals.push_back({cx + 1.15 * r, cy + 0.3 * r});
    goals.push_back({cx - 1.15 * r, cy + 0.3 * r});
}

inline RegionGraph graph_of(const Instance& inst, double cell_divisor = 10.0) {
    return decompose(inst.workspace, inst.radius, inst.labeled_poses(),
                     inst.radius / cell_divisor);
}

inline Instance random_instance(int n, double d, uint64_t seed, int buffers = 0,
                                Workspace ws = {10.0, 10.0}) {
    std::optional<Instance> inst = generate_instance(n, d, ws, seed);
    if (!inst) throw std::runtime_error("fixture generation failed");
    if (buffers > 0) inst->buffers = generate_candidate_buffers(*inst, buffers, 100, seed);
    return *inst;
}

// Objects whose start differs from their goal (the action-count floor).
inline int inst_moved_count(const Instance& inst) {
    int c = 0;
    for (int i = 0; i < inst.n; ++i) c += !(inst.starts[i] == inst.goals[i]);
    return c;
}

}  // namespace discplan::testing

#include "discplan/region_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace discplan {

namespace {

struct PackedKey {
    size_t operator()(const std::pair<int, int>& p) const {
        return std::hash<long long>()((static_cast<long long>(p.first) << 32) | p.second);
    }
};

}  // namespace

int RegionGraph::region_of(Vec2 p) const {
    if (!grid_.in_bounds(p))
        throw PositionOutOfBounds("query position outside the configuration rectangle");
    return cell_region_[grid_.cell_of(p)];
}

int RegionGraph::label_bit(PoseLabel label) const {
    for (size_t i = 0; i < poses_.size(); ++i)
        if (poses_[i].first == label) return static_cast<int>(i);
    return -1;
}

int RegionGraph::pose_region(PoseLabel label) const {
    const int bit = label_bit(label);
    if (bit < 0) throw UnmappedPose("pose label not part of this decomposition: " + label.to_string());
    return pose_region_[bit];
}

Vec2 RegionGraph::pose_position(PoseLabel label) const {
    const int bit = label_bit(label);
    if (bit < 0) throw UnmappedPose("pose label not part of this decomposition: " + label.to_string());
    return poses_[bit].second;
}

LabelSet RegionGraph::self_excluded(const LabelSet& interference, int moving_object) const {
    LabelSet out = interference;
    for (size_t i = 0; i < poses_.size(); ++i)
        if (poses_[i].first.object == moving_object && poses_[i].first.kind != PoseKind::Buffer)
            out.reset(static_cast<int>(i));
    return out;
}

RegionGraph decompose(const Workspace& ws, double r,
                      const std::vector<std::pair<PoseLabel, Vec2>>& poses,
                      double cell_size, const DecomposeOptions& opts) {
    if (r <= 0) throw std::invalid_argument("decompose: radius must be positive");
    if (ws.width <= 2 * r || ws.height <= 2 * r)
        throw std::invalid_argument("decompose: configuration rectangle is empty");
    if (cell_size > r / 4.0)
        throw ResolutionTooCoarse("cell_size must be at most r/4");
    for (const auto& [label, pos] : poses)
        if (!ws.contains_center(pos, r))
            throw PositionOutOfBounds("pose outside the configuration rectangle: " + label.to_string());

    RegionGraph g;
    g.workspace_ = ws;
    g.radius_ = r;
    g.poses_ = poses;
    for (const auto& [label, pos] : poses)
        g.num_objects_ = std::max(g.num_objects_, label.object + 1);

    // Grid covering exactly the inset rectangle; actual cell sizes shrink to
    // the nearest exact cover of the requested resolution.
    const double inset_w = ws.width - 2 * r;
    const double inset_h = ws.height - 2 * r;
    Grid& grid = g.grid_;
    grid.origin_x = r;
    grid.origin_y = r;
    grid.cols = std::max(1, static_cast<int>(std::ceil(inset_w / cell_size)));
    grid.rows = std::max(1, static_cast<int>(std::ceil(inset_h / cell_size)));
    grid.cell_w = inset_w / grid.cols;
    grid.cell_h = inset_h / grid.rows;

    const int num_cells = grid.num_cells();
    const int num_labels = static_cast<int>(poses.size());

    // Per-cell interference sets: stamp each conflict disc over its bounding
    // box of cells, testing cell centers against the 2r radius.
    std::vector<LabelSet> cell_sets(num_cells, LabelSet(num_labels));
    const double rr4 = 4.0 * r * r;
    for (int bit = 0; bit < num_labels; ++bit) {
        const Vec2 c = poses[bit].second;
        const int cx_lo = std::max(0, static_cast<int>((c.x - 2 * r - grid.origin_x) / grid.cell_w) - 1);
        const int cx_hi = std::min(grid.cols - 1, static_cast<int>((c.x + 2 * r - grid.origin_x) / grid.cell_w) + 1);
        const int cy_lo = std::max(0, static_cast<int>((c.y - 2 * r - grid.origin_y) / grid.cell_h) - 1);
        const int cy_hi = std::min(grid.rows - 1, static_cast<int>((c.y + 2 * r - grid.origin_y) / grid.cell_h) + 1);
        for (int cy = cy_lo; cy <= cy_hi; ++cy) {
            const double py = grid.origin_y + (cy + 0.5) * grid.cell_h;
            for (int cx = cx_lo; cx <= cx_hi; ++cx) {
                const double px = grid.origin_x + (cx + 0.5) * grid.cell_w;
                const double dx = px - c.x;
                const double dy = py - c.y;
                if (dx * dx + dy * dy < rr4) cell_sets[grid.cell_index(cx, cy)].set(bit);
            }
        }
    }

    // Collapse identical sets into class ids, then split classes into
    // 4-connected components: those components are the regions.
    std::unordered_map<LabelSet, int, LabelSetHash> class_ids;
    std::vector<int> cell_class(num_cells);
    std::vector<const LabelSet*> class_set;
    for (int cell = 0; cell < num_cells; ++cell) {
        auto [it, inserted] = class_ids.try_emplace(cell_sets[cell], static_cast<int>(class_ids.size()));
        cell_class[cell] = it->second;
        if (inserted) class_set.push_back(&it->first);
    }

    g.cell_region_.assign(num_cells, -1);
    std::vector<int> stack;
    for (int cell = 0; cell < num_cells; ++cell) {
        if (g.cell_region_[cell] >= 0) continue;
        const int region_id = static_cast<int>(g.regions_.size());
        const int cls = cell_class[cell];
        Region region;
        region.id = region_id;
        region.interference = *class_set[cls];
        region.seed_cell = cell;
        stack.assign(1, cell);
        g.cell_region_[cell] = region_id;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            region.cells.push_back(cur);
            const int cx = cur % grid.cols;
            const int cy = cur / grid.cols;
            const int neighbors[4] = {
                cx > 0 ? cur - 1 : -1,
                cx + 1 < grid.cols ? cur + 1 : -1,
                cy > 0 ? cur - grid.cols : -1,
                cy + 1 < grid.rows ? cur + grid.cols : -1,
            };
            for (int nb : neighbors) {
                if (nb < 0 || g.cell_region_[nb] >= 0 || cell_class[nb] != cls) continue;
                g.cell_region_[nb] = region_id;
                stack.push_back(nb);
            }
        }
        std::sort(region.cells.begin(), region.cells.end());
        g.regions_.push_back(std::move(region));
    }

    // Adjacency from 4-adjacent cell pairs in distinct regions, optionally
    // restricted to pairs whose interference differs by exactly one label.
    // Poses closer together than the raster can resolve produce conflict-disc
    // boundaries that coincide within one cell band; their labels flip
    // together, so such clusters count as a single boundary crossing.
    const double cluster_span = 2.0 * std::max(grid.cell_w, grid.cell_h);
    auto single_boundary = [&](const LabelSet& a, const LabelSet& b) {
        const int diff = a.symmetric_difference_count(b);
        if (diff == 1) return true;
        std::vector<int> bits;
        for (int bit = 0; bit < num_labels; ++bit)
            if (a.test(bit) != b.test(bit)) bits.push_back(bit);
        for (size_t i = 0; i < bits.size(); ++i)
            for (size_t j = i + 1; j < bits.size(); ++j)
                if (distance(poses[bits[i]].second, poses[bits[j]].second) > cluster_span)
                    return false;
        return true;
    };
    std::unordered_map<std::pair<int, int>, bool, PackedKey> seen_pairs;
    g.adjacency_.assign(g.regions_.size(), {});
    auto consider_edge = [&](int cell_a, int cell_b) {
        const int ra = g.cell_region_[cell_a];
        const int rb = g.cell_region_[cell_b];
        if (ra == rb) return;
        const auto key = std::minmax(ra, rb);
        if (!seen_pairs.try_emplace({key.first, key.second}, true).second) return;
        if (opts.one_label_edge_restriction &&
            !single_boundary(g.regions_[ra].interference, g.regions_[rb].interference))
            return;
        g.adjacency_[ra].push_back(rb);
        g.adjacency_[rb].push_back(ra);
    };
    for (int cy = 0; cy < grid.rows; ++cy)
        for (int cx = 0; cx < grid.cols; ++cx) {
            const int cell = grid.cell_index(cx, cy);
            if (cx + 1 < grid.cols) consider_edge(cell, cell + 1);
            if (cy + 1 < grid.rows) consider_edge(cell, cell + grid.cols);
        }
    for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());

    g.pose_region_.resize(num_labels);
    for (int bit = 0; bit < num_labels; ++bit)
        g.pose_region_[bit] = g.cell_region_[grid.cell_of(poses[bit].second)];

    return g;
}

std::optional<Walk> rg_dfs(const RegionGraph& g, int moving_object, PoseLabel from,
                           PoseLabel to, const LabelSet& occupied) {
    (void)moving_object;  // occupancy already excludes the mover's own pose
    const int src = g.pose_region(from);
    const int dst = g.pose_region(to);

    auto traversable = [&](int region) {
        return !g.regions()[region].interference.intersects(occupied);
    };
    if (!traversable(src) || !traversable(dst)) return std::nullopt;

    // BFS over traversable regions; ascending neighbor order keeps walks
    // deterministic and shortest.
    std::vector<int> parent(g.regions().size(), -2);
    std::queue<int> queue;
    parent[src] = -1;
    queue.push(src);
    while (!queue.empty() && parent[dst] == -2) {
        const int cur = queue.front();
        queue.pop();
        for (int nb : g.adjacency()[cur]) {
            if (parent[nb] != -2 || !traversable(nb)) continue;
            parent[nb] = cur;
            queue.push(nb);
            if (nb == dst) break;
        }
    }
    if (parent[dst] == -2) return std::nullopt;

    Walk walk;
    walk.interference = g.empty_label_set();
    for (int cur = dst; cur != -1; cur = parent[cur]) walk.region_ids.push_back(cur);
    std::reverse(walk.region_ids.begin(), walk.region_ids.end());
    for (int id : walk.region_ids) walk.interference |= g.regions()[id].interference;
    return walk;
}

Walk curve_to_walk(const RegionGraph& g, const std::vector<Vec2>& polyline) {
    if (polyline.empty()) throw std::invalid_argument("curve_to_walk: empty polyline");
    for (const Vec2& p : polyline)
        if (!g.grid().in_bounds(p))
            throw PositionOutOfBounds("polyline vertex outside the configuration rectangle");

    const double step = g.grid().sample_step();
    Walk walk;
    walk.interference = g.empty_label_set();
    int last_region = -1;
    auto emit = [&](Vec2 p) {
        const int region = g.region_of_cell(g.grid().cell_of(p));
        if (region != last_region) {
            walk.region_ids.push_back(region);
            walk.interference |= g.regions()[region].interference;
            last_region = region;
        }
    };

    emit(polyline.front());
    for (size_t i = 0; i + 1 < polyline.size(); ++i) {
        const Vec2 a = polyline[i];
        const Vec2 b = polyline[i + 1];
        const double len = distance(a, b);
        const int samples = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int s = 1; s <= samples; ++s) {
            const double t = static_cast<double>(s) / samples;
            emit({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return walk;
}

std::vector<Vec2> walk_to_curve(const RegionGraph& g, const Walk& walk,
                                std::optional<Vec2> from, std::optional<Vec2> to) {
    if (walk.region_ids.empty()) throw std::invalid_argument("walk_to_curve: empty walk");
    const Grid& grid = g.grid();
    const int stages = static_cast<int>(walk.region_ids.size());

    const int start_cell = from ? grid.cell_of(*from) : g.regions()[walk.region_ids.front()].seed_cell;
    const int end_cell = to ? grid.cell_of(*to) : g.regions()[walk.region_ids.back()].seed_cell;
    if (g.region_of_cell(start_cell) != walk.region_ids.front())
        throw RealizationFailure("walk_to_curve: start position not in the walk's first region");
    if (g.region_of_cell(end_cell) != walk.region_ids.back())
        throw RealizationFailure("walk_to_curve: end position not in the walk's last region");

    // BFS over (cell, stage): stay in the stage's region or advance into the
    // next one. The traced cell path visits the walk's regions in order.
    const int num_cells = grid.num_cells();
    std::vector<int> parent(static_cast<size_t>(num_cells) * stages, -2);
    auto state = [&](int cell, int stage) { return static_cast<size_t>(stage) * num_cells + cell; };

    std::queue<std::pair<int, int>> queue;
    parent[state(start_cell, 0)] = -1;
    queue.push({start_cell, 0});
    const size_t goal_state = state(end_cell, stages - 1);
    while (!queue.empty() && parent[goal_state] == -2) {
        const auto [cell, stage] = queue.front();
        queue.pop();
        const int cx = cell % grid.cols;
        const int cy = cell / grid.cols;
        const int neighbors[4] = {
            cx > 0 ? cell - 1 : -1,
            cx + 1 < grid.cols ? cell + 1 : -1,
            cy > 0 ? cell - grid.cols : -1,
            cy + 1 < grid.rows ? cell + grid.cols : -1,
        };
        for (int nb : neighbors) {
            if (nb < 0) continue;
            const int nb_region = g.region_of_cell(nb);
            int nb_stage = -1;
            if (nb_region == walk.region_ids[stage])
                nb_stage = stage;
            else if (stage + 1 < stages && nb_region == walk.region_ids[stage + 1])
                nb_stage = stage + 1;
            else
                continue;
            if (parent[state(nb, nb_stage)] != -2) continue;
            parent[state(nb, nb_stage)] = static_cast<int>(state(cell, stage));
            queue.push({nb, nb_stage});
        }
    }
    if (parent[goal_state] == -2)
        throw RealizationFailure("walk_to_curve: no cell path realizes the walk");

    std::vector<int> cells;
    for (long long s = static_cast<long long>(goal_state); s != -1; s = parent[s])
        cells.push_back(static_cast<int>(s % num_cells));
    std::reverse(cells.begin(), cells.end());

    std::vector<Vec2> polyline;
    if (from) polyline.push_back(*from);
    for (int cell : cells) {
        const Vec2 c = grid.cell_center(cell);
        // Merge same-direction collinear runs; the locus is unchanged.
        // Direction reversals (region re-entries) must keep their vertex.
        if (polyline.size() >= 2) {
            const Vec2& a = polyline[polyline.size() - 2];
            const Vec2& b = polyline.back();
            const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            const double dot = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
            if (cross == 0.0 && dot > 0.0) {
                polyline.back() = c;
                continue;
            }
        }
        polyline.push_back(c);
    }
    if (to) polyline.push_back(*to);
    if (polyline.size() == 1) polyline.push_back(polyline.front());
    return polyline;
}

}  // namespace discplan

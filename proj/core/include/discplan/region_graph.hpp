#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "discplan/geometry.hpp"
#include "discplan/labels.hpp"

namespace discplan {

struct ResolutionTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnmappedPose : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RealizationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raster covering exactly the inset configuration rectangle. Cell (cx, cy)
// spans [origin + cx*cell_w, origin + (cx+1)*cell_w) x [...]; a cell carries
// the interference set of its center point.
struct Grid {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_w = 0.0;
    double cell_h = 0.0;
    int cols = 0;
    int rows = 0;

    int num_cells() const { return cols * rows; }
    int cell_index(int cx, int cy) const { return cy * cols + cx; }

    bool in_bounds(Vec2 p) const {
        return p.x >= origin_x && p.x <= origin_x + cols * cell_w && p.y >= origin_y &&
               p.y <= origin_y + rows * cell_h;
    }

    // Cell owning p; positions on the far boundary clamp into the last cell.
    int cell_of(Vec2 p) const {
        int cx = static_cast<int>((p.x - origin_x) / cell_w);
        int cy = static_cast<int>((p.y - origin_y) / cell_h);
        if (cx >= cols) cx = cols - 1;
        if (cy >= rows) cy = rows - 1;
        if (cx < 0) cx = 0;
        if (cy < 0) cy = 0;
        return cell_index(cx, cy);
    }

    Vec2 cell_center(int cell) const {
        const int cx = cell % cols;
        const int cy = cell / cols;
        return {origin_x + (cx + 0.5) * cell_w, origin_y + (cy + 0.5) * cell_h};
    }

    double sample_step() const { return 0.5 * std::min(cell_w, cell_h); }
};

// Maximal 4-connected set of cells sharing one interference set.
struct Region {
    int id = -1;
    LabelSet interference;
    std::vector<int> cells;  // grid cell indices, ascending
    int seed_cell = -1;      // representative cell (first in scan order)
};

// A sequence of regions together with the union of their interference sets.
// rg_dfs outputs additionally satisfy: consecutive regions are graph-adjacent.
struct Walk {
    std::vector<int> region_ids;
    LabelSet interference;  // raw union over member regions, no exclusions

    bool operator==(const Walk& other) const { return region_ids == other.region_ids; }
};

struct DecomposeOptions {
    // Keep only adjacency edges whose endpoint interference sets differ by
    // exactly one label; disable to debug degenerate tangent configurations.
    bool one_label_edge_restriction = true;
};

class RegionGraph {
public:
    const Grid& grid() const { return grid_; }
    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
    const std::vector<std::pair<PoseLabel, Vec2>>& poses() const { return poses_; }
    double radius() const { return radius_; }
    const Workspace& workspace() const { return workspace_; }
    int num_labels() const { return static_cast<int>(poses_.size()); }

    int region_of_cell(int cell) const { return cell_region_[cell]; }

    // Region owning the cell that contains p. Throws PositionOutOfBounds.
    int region_of(Vec2 p) const;

    // Region of a pose label's center. Throws UnmappedPose for foreign labels.
    int pose_region(PoseLabel label) const;
    Vec2 pose_position(PoseLabel label) const;
    int label_bit(PoseLabel label) const;

    LabelSet empty_label_set() const { return LabelSet(num_labels()); }

    // Removes bits of `object`'s own start/goal labels; reporting helper for
    // the rg_dfs contract (validity checks always use the raw union).
    LabelSet self_excluded(const LabelSet& interference, int moving_object) const;

    friend RegionGraph decompose(const Workspace& ws, double r,
                                 const std::vector<std::pair<PoseLabel, Vec2>>& poses,
                                 double cell_size, const DecomposeOptions& opts);

private:
    Workspace workspace_;
    double radius_ = 0.0;
    Grid grid_;
    std::vector<Region> regions_;
    std::vector<std::vector<int>> adjacency_;   // sorted neighbor region ids
    std::vector<int> cell_region_;              // cell index -> region id
    std::vector<std::pair<PoseLabel, Vec2>> poses_;
    std::vector<int> pose_region_;              // parallel to poses_
    int num_objects_ = 0;                       // max object index + 1
};

// Labels every cell with the interference set of its center, splits label
// classes into 4-connected components, and builds the region adjacency.
RegionGraph decompose(const Workspace& ws, double r,
                      const std::vector<std::pair<PoseLabel, Vec2>>& poses,
                      double cell_size, const DecomposeOptions& opts = {});

// Shortest region walk from `from`'s region to `to`'s region through regions
// whose interference avoids `occupied`; nullopt when none exists. `occupied`
// must hold exactly the labels of poses occupied by objects != moving.
std::optional<Walk> rg_dfs(const RegionGraph& g, int moving_object, PoseLabel from,
                           PoseLabel to, const LabelSet& occupied);

// Region walk traced by a polyline, sampled at half-cell resolution.
Walk curve_to_walk(const RegionGraph& g, const std::vector<Vec2>& polyline);

// Realizes a walk as a polyline through cell centers, visiting the walk's
// regions in order. Endpoints default to region seed cells.
std::vector<Vec2> walk_to_curve(const RegionGraph& g, const Walk& walk,
                                std::optional<Vec2> from = std::nullopt,
                                std::optional<Vec2> to = std::nullopt);

}  // namespace discplan

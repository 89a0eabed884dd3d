#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "discplan/labels.hpp"

namespace discplan {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

using Position = Vec2;

inline double squared_distance(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(Vec2 a, Vec2 b) { return std::sqrt(squared_distance(a, b)); }

// Axis-aligned rectangular workspace. Object centers live in the rectangle
// inset by the disc radius on all sides, which must be nonempty.
struct Workspace {
    double width = 0.0;
    double height = 0.0;

    bool contains_center(Vec2 p, double radius) const {
        return p.x >= radius && p.x <= width - radius && p.y >= radius &&
               p.y <= height - radius;
    }
};

struct PositionOutOfBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two uniform discs of radius r collide iff their interiors overlap; tangency
// (center distance exactly 2r) does not collide.
bool discs_collide(Vec2 p, Vec2 q, double r);

// Membership in the conflict disc D(center): the set of centers at which a
// placed object would collide with an object at `center`.
bool conflict_disc_contains(Vec2 center, Vec2 query, double r);

// True iff no pair of positions collides. Throws PositionOutOfBounds when a
// workspace is given and some center violates the inset rectangle.
bool arrangement_feasible(std::span<const Vec2> positions, double r);
bool arrangement_feasible(std::span<const Vec2> positions, double r, const Workspace& ws);

// Labels of all poses whose disc collides with a disc placed at `query`.
// Callers are responsible for excluding the moving object's own labels.
std::vector<PoseLabel> interference_set(Vec2 query,
                                        std::span<const std::pair<PoseLabel, Vec2>> poses,
                                        double r);

}  // namespace discplan

#include "discplan/geometry.hpp"

namespace discplan {

std::string PoseLabel::to_string() const {
    switch (kind) {
        case PoseKind::Start: return "S" + std::to_string(object);
        case PoseKind::Goal: return "G" + std::to_string(object);
        case PoseKind::Buffer: return "B" + std::to_string(buffer_id);
    }
    return "?";
}

bool discs_collide(Vec2 p, Vec2 q, double r) {
    return squared_distance(p, q) < 4.0 * r * r;
}

bool conflict_disc_contains(Vec2 center, Vec2 query, double r) {
    return discs_collide(center, query, r);
}

bool arrangement_feasible(std::span<const Vec2> positions, double r) {
    for (size_t i = 0; i < positions.size(); ++i)
        for (size_t j = i + 1; j < positions.size(); ++j)
            if (discs_collide(positions[i], positions[j], r)) return false;
    return true;
}

bool arrangement_feasible(std::span<const Vec2> positions, double r, const Workspace& ws) {
    for (const Vec2& p : positions)
        if (!ws.contains_center(p, r))
            throw PositionOutOfBounds("object center outside the inset configuration rectangle");
    return arrangement_feasible(positions, r);
}

std::vector<PoseLabel> interference_set(Vec2 query,
                                        std::span<const std::pair<PoseLabel, Vec2>> poses,
                                        double r) {
    std::vector<PoseLabel> out;
    for (const auto& [label, pos] : poses)
        if (discs_collide(query, pos, r)) out.push_back(label);
    return out;
}

}  // namespace discplan

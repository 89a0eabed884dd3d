#pragma once

#include <optional>
#include <string>

#include "discplan/instance.hpp"
#include "discplan/region_graph.hpp"
#include "discplan/solution.hpp"

namespace discplan {

struct SvgLayers {
    bool regions = true;
    bool poses = true;
    bool paths = true;
};

// Standalone SVG 1.1 document: workspace frame, region cells colored by
// interference cardinality, start/goal/buffer markers, and one labeled
// polyline per solution action.
std::string render_svg(const Instance& inst, const RegionGraph& g,
                       const Solution* solution = nullptr, const SvgLayers& layers = {});

}  // namespace discplan

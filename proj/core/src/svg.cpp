#include "discplan/svg.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace discplan {

namespace {

std::string fmt(double v) {
    char buf[48];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 8);
    return std::string(buf, ptr);
}

// Discrete fill palette indexed by interference cardinality.
constexpr std::array<const char*, 8> kRegionPalette = {
    "#f7fbff", "#c6dbef", "#9ecae1", "#6baed6", "#4292c6", "#2171b5", "#08519c", "#08306b",
};

constexpr std::array<const char*, 10> kPathPalette = {
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
    "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62",
};

}  // namespace

std::string render_svg(const Instance& inst, const RegionGraph& g, const Solution* solution,
                       const SvgLayers& layers) {
    const double w = inst.workspace.width;
    const double h = inst.workspace.height;
    const double scale = 64.0;
    const double margin = 8.0;

    // SVG y grows downward; flip so the workspace origin sits bottom-left.
    auto X = [&](double x) { return margin + x * scale; };
    auto Y = [&](double y) { return margin + (h - y) * scale; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           fmt(w * scale + 2 * margin) + "\" height=\"" + fmt(h * scale + 2 * margin) + "\">\n";
    out += "<rect x=\"" + fmt(margin) + "\" y=\"" + fmt(margin) + "\" width=\"" + fmt(w * scale) +
           "\" height=\"" + fmt(h * scale) +
           "\" fill=\"#ffffff\" stroke=\"#222222\" stroke-width=\"2\"/>\n";

    if (layers.regions) {
        const Grid& grid = g.grid();
        out += "<g stroke=\"none\">\n";
        for (int cy = 0; cy < grid.rows; ++cy) {
            for (int cx = 0; cx < grid.cols; ++cx) {
                const int region = g.region_of_cell(grid.cell_index(cx, cy));
                const int level = g.regions()[region].interference.count();
                const char* color =
                    kRegionPalette[std::min<size_t>(level, kRegionPalette.size() - 1)];
                const double x0 = grid.origin_x + cx * grid.cell_w;
                const double y1 = grid.origin_y + (cy + 1) * grid.cell_h;
                out += "<rect x=\"" + fmt(X(x0)) + "\" y=\"" + fmt(Y(y1)) + "\" width=\"" +
                       fmt(grid.cell_w * scale + 0.5) + "\" height=\"" +
                       fmt(grid.cell_h * scale + 0.5) + "\" fill=\"" + color + "\"/>\n";
            }
        }
        out += "</g>\n";
    }

    if (layers.poses) {
        auto marker = [&](Vec2 p, const char* stroke, const char* dash, const std::string& text) {
            out += "<circle cx=\"" + fmt(X(p.x)) + "\" cy=\"" + fmt(Y(p.y)) + "\" r=\"" +
                   fmt(inst.radius * scale) + "\" fill=\"none\" stroke=\"" + stroke +
                   "\" stroke-width=\"2\"";
            if (dash) out += std::string(" stroke-dasharray=\"") + dash + "\"";
            out += "/>\n";
            out += "<text x=\"" + fmt(X(p.x)) + "\" y=\"" + fmt(Y(p.y) + 4) +
                   "\" font-size=\"12\" text-anchor=\"middle\" fill=\"" + stroke + "\">" + text +
                   "</text>\n";
        };
        for (int i = 0; i < inst.n; ++i)
            marker(inst.starts[i], "#1a7a1a", nullptr, "S" + std::to_string(i));
        for (int i = 0; i < inst.n; ++i)
            marker(inst.goals[i], "#c01717", "6,4", "G" + std::to_string(i));
        for (size_t k = 0; k < inst.buffers.size(); ++k)
            marker(inst.buffers[k], "#6a33a8", "2,3", "B" + std::to_string(k));
    }

    if (layers.paths && solution) {
        for (size_t a = 0; a < solution->actions.size(); ++a) {
            const SolutionAction& action = solution->actions[a];
            if (action.polyline.size() < 2) continue;
            const char* color = kPathPalette[a % kPathPalette.size()];
            out += "<polyline fill=\"none\" stroke=\"";
            out += color;
            out += "\" stroke-width=\"2.5\" points=\"";
            for (size_t i = 0; i < action.polyline.size(); ++i) {
                if (i) out += ' ';
                out += fmt(X(action.polyline[i].x)) + "," + fmt(Y(action.polyline[i].y));
            }
            out += "\"/>\n";
            const Vec2 mid = action.polyline[action.polyline.size() / 2];
            out += "<text x=\"" + fmt(X(mid.x) + 4) + "\" y=\"" + fmt(Y(mid.y) - 4) +
                   "\" font-size=\"14\" font-weight=\"bold\" fill=\"";
            out += color;
            out += "\">" + std::to_string(a + 1) + ":o" + std::to_string(action.object) +
                   "</text>\n";
        }
    }

    out += "</svg>\n";
    return out;
}

}  // namespace discplan

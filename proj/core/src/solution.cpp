#include "discplan/solution.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace discplan {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void append_point(std::string& out, Vec2 p) {
    out += '[';
    out += fmt_double(p.x);
    out += ',';
    out += fmt_double(p.y);
    out += ']';
}

Vec2 parse_point(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected an [x,y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string solution_to_json(const Solution& sol) {
    std::string out = "{\"actions\":[";
    for (size_t i = 0; i < sol.actions.size(); ++i) {
        const SolutionAction& a = sol.actions[i];
        if (i) out += ',';
        out += "{\"object\":";
        out += std::to_string(a.object);
        out += ",\"kind\":\"";
        out += (a.kind == ActionKind::ToGoal ? "to_goal" : "to_buffer");
        out += "\",\"from\":";
        append_point(out, a.from);
        out += ",\"to\":";
        append_point(out, a.to);
        out += ",\"walk\":[";
        for (size_t k = 0; k < a.walk.region_ids.size(); ++k) {
            if (k) out += ',';
            out += std::to_string(a.walk.region_ids[k]);
        }
        out += "],\"polyline\":[";
        for (size_t k = 0; k < a.polyline.size(); ++k) {
            if (k) out += ',';
            append_point(out, a.polyline[k]);
        }
        out += "]}";
    }
    out += "],\"num_actions\":";
    out += std::to_string(sol.num_actions);
    out += ",\"num_buffers\":";
    out += std::to_string(sol.num_buffers);
    out += ",\"time_s\":";
    out += fmt_double(sol.time_s);
    out += ",\"seed\":";
    out += std::to_string(sol.seed);
    out += "}\n";
    return out;
}

Solution solution_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    for (const char* field : {"actions", "num_actions", "num_buffers"})
        if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");

    Solution sol;
    for (const auto& ja : j["actions"]) {
        SolutionAction a;
        a.object = ja.at("object").get<int>();
        const std::string kind = ja.at("kind").get<std::string>();
        if (kind == "to_goal")
            a.kind = ActionKind::ToGoal;
        else if (kind == "to_buffer")
            a.kind = ActionKind::ToBuffer;
        else
            throw ParseError("unknown action kind: " + kind);
        a.from = parse_point(ja.at("from"));
        a.to = parse_point(ja.at("to"));
        if (ja.contains("walk"))
            for (const auto& rid : ja["walk"]) a.walk.region_ids.push_back(rid.get<int>());
        if (ja.contains("polyline"))
            for (const auto& p : ja["polyline"]) a.polyline.push_back(parse_point(p));
        sol.actions.push_back(std::move(a));
    }
    sol.num_actions = j["num_actions"].get<int>();
    sol.num_buffers = j["num_buffers"].get<int>();
    if (j.contains("time_s")) sol.time_s = j["time_s"].get<double>();
    if (j.contains("seed")) sol.seed = j["seed"].get<uint64_t>();
    return sol;
}

void save_solution(const Solution& sol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write solution file: " + path);
    out << solution_to_json(sol);
}

Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open solution file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return solution_from_json(ss.str());
}

ReplayResult replay_solution(const Instance& inst, const RegionGraph& g, const Solution& sol) {
    const double r = inst.radius;
    const double cell = std::max(g.grid().cell_w, g.grid().cell_h);
    const double slack = 0.75 * cell;
    auto fail = [](std::string msg) { return ReplayResult{false, std::move(msg)}; };

    std::vector<Vec2> current = inst.starts;
    for (size_t ai = 0; ai < sol.actions.size(); ++ai) {
        const SolutionAction& a = sol.actions[ai];
        if (a.object < 0 || a.object >= inst.n)
            return fail("action " + std::to_string(ai) + ": object index out of range");
        if (squared_distance(a.from, current[a.object]) > 0.0)
            return fail("action " + std::to_string(ai) + ": does not depart from the object's position");
        if (a.polyline.size() < 2)
            return fail("action " + std::to_string(ai) + ": missing polyline");
        if (squared_distance(a.polyline.front(), a.from) > 0.0 ||
            squared_distance(a.polyline.back(), a.to) > 0.0)
            return fail("action " + std::to_string(ai) + ": polyline endpoints disagree with from/to");

        const double step = g.grid().sample_step();
        for (size_t s = 0; s + 1 < a.polyline.size(); ++s) {
            const Vec2 p0 = a.polyline[s];
            const Vec2 p1 = a.polyline[s + 1];
            const double len = distance(p0, p1);
            const int samples = std::max(1, static_cast<int>(std::ceil(len / step)));
            for (int k = 0; k <= samples; ++k) {
                const double t = static_cast<double>(k) / samples;
                const Vec2 p{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
                if (!g.grid().in_bounds(p))
                    return fail("action " + std::to_string(ai) + ": path leaves the workspace");
                const Vec2 c = g.grid().cell_center(g.grid().cell_of(p));
                for (int other = 0; other < inst.n; ++other) {
                    if (other == a.object) continue;
                    if (discs_collide(c, current[other], r))
                        return fail("action " + std::to_string(ai) + ": swept cell collides with object " +
                                    std::to_string(other));
                    if (distance(p, current[other]) < 2 * r - slack)
                        return fail("action " + std::to_string(ai) + ": path too close to object " +
                                    std::to_string(other));
                }
            }
        }
        // Placement feasibility is the endpoint sample's check: raster-exact
        // at the cell center plus the resolution-slack bound on the pose.
        current[a.object] = a.to;
    }
    for (int i = 0; i < inst.n; ++i)
        if (squared_distance(current[i], inst.goals[i]) > 0.0)
            return fail("object " + std::to_string(i) + " does not end at its goal");
    return {true, {}};
}

}  // namespace discplan

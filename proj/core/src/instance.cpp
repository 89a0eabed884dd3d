#include "discplan/instance.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace discplan {

namespace {

// 17 significant digits round-trips any double exactly and is locale-free.
std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void append_points(std::string& out, const std::vector<Vec2>& pts) {
    out += '[';
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ',';
        out += '[';
        out += fmt_double(pts[i].x);
        out += ',';
        out += fmt_double(pts[i].y);
        out += ']';
    }
    out += ']';
}

std::vector<Vec2> parse_points(const nlohmann::json& j, const char* field) {
    if (!j.is_array()) throw ParseError(std::string("field '") + field + "' must be an array of [x,y] pairs");
    std::vector<Vec2> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ParseError(std::string("field '") + field + "' entry " +
                             std::to_string(out.size()) + " is not an [x,y] pair");
        out.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return out;
}

}  // namespace

void Instance::validate() const {
    if (workspace.width <= 0 || workspace.height <= 0)
        throw ValidationError("workspace dimensions must be positive");
    if (radius <= 0) throw ValidationError("radius must be positive");
    if (workspace.width <= 2 * radius || workspace.height <= 2 * radius)
        throw ValidationError("workspace too small: configuration rectangle is empty");
    if (n != static_cast<int>(starts.size()))
        throw ValidationError("starts length does not match n");
    if (n != static_cast<int>(goals.size()))
        throw ValidationError("goals length does not match n");
    for (const auto* arr : {&starts, &goals, &buffers})
        for (const Vec2& p : *arr)
            if (!workspace.contains_center(p, radius))
                throw ValidationError("position outside the inset configuration rectangle");
    if (!arrangement_feasible(starts, radius))
        throw ValidationError("start arrangement has overlapping objects");
    if (!arrangement_feasible(goals, radius))
        throw ValidationError("goal arrangement has overlapping objects");
}

int Instance::label_bit(PoseLabel label) const {
    switch (label.kind) {
        case PoseKind::Start: return label.object;
        case PoseKind::Goal: return n + label.object;
        case PoseKind::Buffer: return 2 * n + label.buffer_id;
    }
    return -1;
}

PoseLabel Instance::label_of_bit(int bit) const {
    if (bit < n) return PoseLabel::start(bit);
    if (bit < 2 * n) return PoseLabel::goal(bit - n);
    return PoseLabel::buffer(bit - 2 * n);
}

Vec2 Instance::label_position(PoseLabel label) const {
    switch (label.kind) {
        case PoseKind::Start: return starts[label.object];
        case PoseKind::Goal: return goals[label.object];
        case PoseKind::Buffer: return buffers[label.buffer_id];
    }
    return {};
}

std::vector<std::pair<PoseLabel, Vec2>> Instance::labeled_poses() const {
    std::vector<std::pair<PoseLabel, Vec2>> out;
    out.reserve(num_labels());
    for (int i = 0; i < n; ++i) out.emplace_back(PoseLabel::start(i), starts[i]);
    for (int i = 0; i < n; ++i) out.emplace_back(PoseLabel::goal(i), goals[i]);
    for (size_t k = 0; k < buffers.size(); ++k)
        out.emplace_back(PoseLabel::buffer(static_cast<int>(k)), buffers[k]);
    return out;
}

Vec2 Arrangement::position_of(const Instance& inst, int object) const {
    const Mode& m = modes[object];
    switch (m.kind) {
        case Mode::AtStart: return inst.starts[object];
        case Mode::AtGoal: return inst.goals[object];
        case Mode::AtParked: return inst.label_position(m.parked_at);
    }
    return {};
}

std::vector<Vec2> Arrangement::positions(const Instance& inst) const {
    std::vector<Vec2> out;
    out.reserve(modes.size());
    for (size_t i = 0; i < modes.size(); ++i)
        out.push_back(position_of(inst, static_cast<int>(i)));
    return out;
}

PoseLabel Arrangement::label_of(int object) const {
    const Mode& m = modes[object];
    switch (m.kind) {
        case Mode::AtStart: return PoseLabel::start(object);
        case Mode::AtGoal: return PoseLabel::goal(object);
        case Mode::AtParked: return m.parked_at;
    }
    return {};
}

int Arrangement::num_at_goal() const {
    int c = 0;
    for (const Mode& m : modes) c += (m.kind == Mode::AtGoal);
    return c;
}

double density(const Instance& inst) {
    return inst.n * std::numbers::pi * inst.radius * inst.radius /
           (inst.workspace.width * inst.workspace.height);
}

std::optional<Instance> generate_instance(int n, double target_density, Workspace ws,
                                          uint64_t seed, const GenerationConfig& cfg) {
    if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
    if (target_density <= 0 || target_density >= 0.9)
        throw std::invalid_argument("generate_instance: density must be in (0, 0.9)");

    const double r = std::sqrt(target_density * ws.width * ws.height / (n * std::numbers::pi));
    if (ws.width <= 2 * r || ws.height <= 2 * r) return std::nullopt;

    SplitMix64 rng(seed);
    auto sample_arrangement = [&](std::vector<Vec2>& out) -> bool {
        out.clear();
        for (int i = 0; i < n; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < cfg.max_attempts_per_position; ++attempt) {
                Vec2 p{rng.next_in(r, ws.width - r), rng.next_in(r, ws.height - r)};
                bool clash = false;
                for (const Vec2& q : out)
                    if (discs_collide(p, q, r)) {
                        clash = true;
                        break;
                    }
                if (!clash) {
                    out.push_back(p);
                    placed = true;
                    break;
                }
            }
            if (!placed) return false;
        }
        return true;
    };

    Instance inst;
    inst.workspace = ws;
    inst.radius = r;
    inst.n = n;
    if (!sample_arrangement(inst.starts)) return std::nullopt;
    if (!sample_arrangement(inst.goals)) return std::nullopt;
    inst.validate();
    return inst;
}

std::string instance_to_json(const Instance& inst) {
    std::string out;
    out += "{\"workspace\":{\"width\":";
    out += fmt_double(inst.workspace.width);
    out += ",\"height\":";
    out += fmt_double(inst.workspace.height);
    out += "},\"radius\":";
    out += fmt_double(inst.radius);
    out += ",\"n\":";
    out += std::to_string(inst.n);
    out += ",\"starts\":";
    append_points(out, inst.starts);
    out += ",\"goals\":";
    append_points(out, inst.goals);
    out += ",\"buffers\":";
    append_points(out, inst.buffers);
    out += "}\n";
    return out;
}

Instance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    for (const char* field : {"workspace", "radius", "n", "starts", "goals"})
        if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    if (!j["workspace"].contains("width") || !j["workspace"].contains("height"))
        throw ParseError("workspace must contain 'width' and 'height'");

    Instance inst;
    inst.workspace.width = j["workspace"]["width"].get<double>();
    inst.workspace.height = j["workspace"]["height"].get<double>();
    inst.radius = j["radius"].get<double>();
    inst.n = j["n"].get<int>();
    inst.starts = parse_points(j["starts"], "starts");
    inst.goals = parse_points(j["goals"], "goals");
    if (j.contains("buffers")) inst.buffers = parse_points(j["buffers"], "buffers");
    inst.validate();
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << instance_to_json(inst);
}

}  // namespace discplan

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "discplan/geometry.hpp"

namespace discplan {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A rearrangement problem: n uniform discs with a feasible start arrangement,
// a feasible goal arrangement, and an optional list of candidate buffer slots.
struct Instance {
    Workspace workspace;
    double radius = 0.0;
    int n = 0;
    std::vector<Vec2> starts;
    std::vector<Vec2> goals;
    std::vector<Vec2> buffers;

    // Throws ValidationError if any invariant fails.
    void validate() const;

    // Total label universe: n starts, n goals, buffers.size() buffer slots.
    int num_labels() const { return 2 * n + static_cast<int>(buffers.size()); }

    int label_bit(PoseLabel label) const;
    PoseLabel label_of_bit(int bit) const;
    Vec2 label_position(PoseLabel label) const;

    std::vector<std::pair<PoseLabel, Vec2>> labeled_poses() const;
};

// Per-object placement, encoded as a mode rather than raw coordinates.
// AtParked covers candidate buffer slots and borrowed poses (another
// object's free start or goal used as a parking spot).
struct Mode {
    enum Kind : uint8_t { AtStart = 0, AtGoal = 1, AtParked = 2 };
    Kind kind = AtStart;
    PoseLabel parked_at;  // meaningful iff kind == AtParked

    static Mode at_start() { return {AtStart, {}}; }
    static Mode at_goal() { return {AtGoal, {}}; }
    static Mode at_buffer(int id) { return {AtParked, PoseLabel::buffer(id)}; }
    static Mode at_parked(PoseLabel label) { return {AtParked, label}; }

    bool operator==(const Mode& other) const {
        if (kind != other.kind) return false;
        return kind != AtParked || parked_at == other.parked_at;
    }
};

struct Arrangement {
    std::vector<Mode> modes;

    static Arrangement all_start(int n) { return {std::vector<Mode>(n, Mode::at_start())}; }
    static Arrangement all_goal(int n) { return {std::vector<Mode>(n, Mode::at_goal())}; }

    bool operator==(const Arrangement&) const = default;

    Vec2 position_of(const Instance& inst, int object) const;
    std::vector<Vec2> positions(const Instance& inst) const;
    PoseLabel label_of(int object) const;

    int num_at_goal() const;
};

// Ratio of total object area to workspace area.
double density(const Instance& inst);

struct GenerationConfig {
    int max_attempts_per_position = 2000;
};

// Rejection-samples a random instance at the requested density; the radius is
// derived from the density at fixed workspace area. Deterministic per seed.
// Returns nullopt when some position cannot be placed within the attempt
// budget (an over-dense request).
std::optional<Instance> generate_instance(int n, double target_density, Workspace ws,
                                          uint64_t seed, const GenerationConfig& cfg = {});

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

// Portable uniform doubles in [0,1) from a 64-bit generator state; used by
// every sampler in the project so runs are reproducible across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, bound).
    uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

private:
    uint64_t state_;
};

}  // namespace discplan

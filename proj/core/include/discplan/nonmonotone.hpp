#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "discplan/monotone.hpp"

namespace discplan {

struct BufferOccupied : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Moving `object` to `buffer` before its goal, splitting its motion in two.
struct Perturbation {
    int object = -1;
    PoseLabel buffer;

    bool operator==(const Perturbation&) const = default;
};

struct SearchConfig {
    // Exhaustive mode disables the per-node object/buffer caps and the tier-1
    // reachability pre-filter, trading speed for the 1-buffer minimality
    // guarantee: depth-k perturbations are exhausted before depth k+1.
    bool exhaustive = false;
    int max_objects_per_node = 5;
    int max_buffers_per_object = 5;
    double time_limit_s = 300.0;
    // Memory valve: the tree stops growing past this many nodes and the
    // search reports NodeLimit (hit only by instances that would otherwise
    // burn the whole deadline accumulating arrangements).
    size_t max_tree_nodes = 1000000;
    uint64_t seed = 0;
};

// Subtree of arrangements reachable from one perturbation node (or the
// initial arrangement) via monotone transitions only.
struct SuperNode {
    int id = -1;
    int root_node = -1;  // index into SearchTree::nodes
    int perturbation_count = 0;
    int objects_at_goal = 0;  // of the root arrangement
    std::vector<int> members;
    std::vector<Perturbation> tried_perturbations;
    bool expanded = false;  // root's ranked perturbation batch has been run
};

struct SearchNode {
    Arrangement arrangement;
    int parent = -1;
    int super_node = -1;
    // Edge from the parent: which object moved where, and along which walk.
    int moved_object = -1;
    PoseLabel from_label;
    PoseLabel to_label;
    Walk walk;
};

// Arrangement-space tree with perturbation structure and global key dedup.
class SearchTree {
public:
    std::vector<SearchNode> nodes;
    std::vector<SuperNode> supers;

    int init(const Arrangement& root);
    int find(const Arrangement& arr) const;  // -1 when unseen

    // Adds a node under `parent`; `is_perturbation` opens a new super node
    // rooted here. Returns the new node index.
    int add_node(const Arrangement& arr, int parent, int moved_object, PoseLabel from,
                 PoseLabel to, Walk walk, bool is_perturbation);

    int best_objects_at_goal() const;

private:
    static std::string encode(const Arrangement& arr);
    std::unordered_map<std::string, int> dedup_;
};

enum class SearchStatus { Solved, Exhausted, DeadlineExceeded, NodeLimit };

struct InformedResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::optional<Solution> solution;
    SearchTree tree;       // diagnostics on failure
    int best_at_goal = 0;  // objects at goal in the best partial arrangement
    SolverCounters counters;
    double wall_time_s = 0.0;
};

// One-buffer extension of dfs_dp: the perturbed object must visit its buffer
// before its goal while every other object moves at most once. Throws
// BufferOccupied when the buffer pose is taken in `from`.
MonotoneTree edfs_dp(const Instance& inst, const RegionGraph& g, const Arrangement& from,
                     const Arrangement& to, const Perturbation& pert, PathDictionary& dict,
                     Deadline deadline, SolverCounters* counters = nullptr);

// Informed search over the perturbation space: initial monotone attempt, then
// repeatedly pick an expansion node, rank objects by dependency degree and
// buffers by tier, and run edfs_dp per perturbation until the goal
// arrangement is reached, the space is exhausted, or the deadline passes.
InformedResult informed_search(const Instance& inst, const RegionGraph& g,
                               const SearchConfig& config);

// Super-node root with untried perturbations remaining: minimal perturbation
// count, then most objects at goal, then insertion order. -1 when exhausted.
int select_expansion_node(const SearchTree& tree);

// Objects not at goal, ranked by descending inner+outer dependency degree
// (how many goals the object's position blocks + how many objects block its
// goal); ties broken by ascending index.
std::vector<int> rank_perturbation_objects(const Instance& inst, const Arrangement& current);

// Greedy pre-search buffer generation: per slot, keep the sample colliding
// with the fewest starts, goals, and already-chosen buffers.
std::vector<Vec2> generate_candidate_buffers(const Instance& inst, int count,
                                             int samples_per_slot, uint64_t seed);

// Buffer ranking for perturbing `object` at `current`: clean reachable
// candidate buffers, then starts of objects already at goal, then unoccupied
// foreign goals; truncated per config (exhaustive mode lifts the filters).
std::vector<PoseLabel> rank_buffers(const Instance& inst, const RegionGraph& g,
                                    const Arrangement& current, int object,
                                    const SearchConfig& config);

// Shared engine for informed_search and the random-ablation baseline.
enum class SelectionPolicy { Informed, Random };
InformedResult arrangement_space_search(const Instance& inst, const RegionGraph& g,
                                        const SearchConfig& config, SelectionPolicy policy);

}  // namespace discplan

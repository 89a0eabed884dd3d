#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace discplan {

enum class PoseKind : uint8_t { Start, Goal, Buffer };

// Identity of one labeled pose in an instance: an object's start/goal, or a
// shared buffer slot (object is kSentinelObject for buffers).
struct PoseLabel {
    PoseKind kind = PoseKind::Start;
    int object = -1;     // index in [0,n) for Start/Goal, kSentinelObject for Buffer
    int buffer_id = -1;  // index into the candidate buffer list, iff kind == Buffer

    static constexpr int kSentinelObject = -1;

    static PoseLabel start(int object) { return {PoseKind::Start, object, -1}; }
    static PoseLabel goal(int object) { return {PoseKind::Goal, object, -1}; }
    static PoseLabel buffer(int buffer_id) { return {PoseKind::Buffer, kSentinelObject, buffer_id}; }

    bool operator==(const PoseLabel&) const = default;

    std::string to_string() const;
};

// Fixed-universe bitset over the pose labels of one decomposition.
// The universe size is fixed at construction; all binary operations require
// operands from the same universe.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(int num_bits)
        : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    int universe_size() const { return num_bits_; }

    void set(int bit) { words_[bit >> 6] |= uint64_t{1} << (bit & 63); }
    void reset(int bit) { words_[bit >> 6] &= ~(uint64_t{1} << (bit & 63)); }
    bool test(int bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1; }

    bool none() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    int count() const {
        int c = 0;
        for (uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }

    bool intersects(const LabelSet& other) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    LabelSet& operator|=(const LabelSet& other) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    LabelSet& operator&=(const LabelSet& other) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }

    int symmetric_difference_count(const LabelSet& other) const {
        int c = 0;
        for (size_t i = 0; i < words_.size(); ++i)
            c += __builtin_popcountll(words_[i] ^ other.words_[i]);
        return c;
    }

    bool operator==(const LabelSet&) const = default;

    std::vector<int> bits() const {
        std::vector<int> out;
        for (int i = 0; i < num_bits_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    size_t hash() const {
        size_t h = 0xcbf29ce484222325ull;
        for (uint64_t w : words_) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    int num_bits_ = 0;
    std::vector<uint64_t> words_;
};

struct LabelSetHash {
    size_t operator()(const LabelSet& s) const { return s.hash(); }
};

}  // namespace discplan

#pragma once

#include <cstdint>

namespace sympquot {

/// Deterministic seeded generator (splitmix64). Self-contained so that
/// identical seeds give identical streams on every platform and toolchain;
/// the standard-library distributions make no such promise. Generator
/// state is an explicit value passed to whoever needs randomness, never
/// shared mutable state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish integer in [lo, hi], inclusive. Modulo bias is
    /// irrelevant at the ranges used here.
    long uniform(long lo, long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    bool coin() { return (next_u64() & 1) != 0; }

    /// Independent child seed for a labelled subtask; stable under the
    /// order in which subtasks run.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
        Rng r(seed ^ (0xA24BAED4963EE407ULL + salt * 0x9FB21C651E98DF25ULL));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace sympquot

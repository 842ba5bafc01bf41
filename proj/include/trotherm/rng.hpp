#pragma once

#include <cstdint>

namespace trotherm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a stream key from a parent key and a label.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) {
    return mix64(mix64(parent) ^ mix64(label ^ 0xD1B54A32D192ED03ULL));
}

/// Counter-based generator: the k-th draw is a pure function of (key, k), so
/// any number of streams can be created without shared state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x632BE59BD9B4E019ULL * ++counter_); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Standard normal deviate (Box-Muller, no cached second value).
    double normal();

    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Reproducible identity of one random sample.
struct SampleSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;

    CounterRng stream() const { return CounterRng(derive_key(master_seed, sample_index)); }
};

}  // namespace trotherm

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace symreg {

/// Seeded random stream. Uniform and Gaussian variates are produced by fixed
/// transforms of the 64-bit Mersenne Twister output, so a seed yields the same
/// sequence on every standard library:
///   uniform  = (next() >> 11) * 2^-53
///   gaussian = Marsaglia polar method on 2*uniform()-1 pairs, second value cached.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal.
    double gaussian();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z);

/// Derives an independent stream seed from a base seed and a sequence of keys.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Stable 64-bit hash of a name (FNV-1a), used to namespace streams.
std::uint64_t hash_name(std::string_view name);

}  // namespace symreg

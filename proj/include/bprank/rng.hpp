#pragma once

#include <cstdint>
#include <random>

namespace bprank {

// Seeded generator used everywhere a draw must be reproducible.
//
// Version 1 ("bprank-rng-v1"):
//   engine   std::mt19937_64 seeded with the 64-bit seed (the engine's output
//            sequence is fixed by the C++ standard).
//   index    uniform integer in [0, n): draw x; reject while
//            x >= 2^64 - (2^64 mod n); return x mod n.
//   uniform  (x >> 11) * 2^-53, in [0, 1).
//   normal   Box-Muller transform on u1 in (0,1], u2 in [0,1):
//            r = sqrt(-2 ln u1), z0 = r cos(2 pi u2), z1 = r sin(2 pi u2);
//            z0 is returned first, z1 is cached for the next call.
// std:: distributions are deliberately not used because their output is
// implementation-defined. Any change to the above must bump the version.
class Rng {
public:
    static constexpr int kVersion = 1;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n). n must be >= 1.
    std::uint64_t index(std::uint64_t n);

    // Uniform in [0, 1).
    double uniform();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal.
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// Decorrelates related seeds (e.g. per-replicate streams); SplitMix64 finalizer.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace bprank

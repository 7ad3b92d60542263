#pragma once

#include <cstdint>

namespace stencilforge {

// Deterministic PRNG (splitmix64). std:: distributions are
// implementation-defined, so uniform draws are rolled by hand to keep
// outputs bit-identical for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0,n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        return std::size_t(next_u64() % std::uint64_t(n));
    }

private:
    std::uint64_t state_;
};

/// Stable seed derivation so every stage/layer gets an independent stream
/// from one root seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    Rng r(base ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    return r.next_u64();
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag_a,
                                 std::uint64_t tag_b) {
    return derive_seed(derive_seed(base, tag_a), tag_b);
}

} // namespace stencilforge

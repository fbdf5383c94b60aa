#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace kinex {

/// Random stream used by every simulation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// mappings to [0,1) and to bounded integers are done here by hand; together
/// this makes seeded output identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for replicate `replicate` of grid cell (lambda_index, gamma_index).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t lambda_index,
                          std::uint64_t gamma_index, std::uint64_t replicate);

}  // namespace kinex

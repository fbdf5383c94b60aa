#include "kinex/rng.hpp"

#include "kinex/error.hpp"

namespace kinex {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("Rng::below: bound must be positive");
    u128 m = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<u128>(engine_()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t lambda_index,
                          std::uint64_t gamma_index, std::uint64_t replicate) {
    std::uint64_t h = mix64(base_seed);
    h = mix64(h ^ lambda_index);
    h = mix64(h ^ (gamma_index + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (replicate + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

}  // namespace kinex

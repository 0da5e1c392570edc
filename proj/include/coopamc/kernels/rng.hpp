#pragma once
// Counter-based random bits for the packet-cycle simulation.
//
// Every draw is a pure function of (seed, cycle, draw_index), so any
// partition of the cycle range reproduces the serial run exactly and the
// SIMD kernel can evaluate lanes in any grouping. The mixer is the
// splitmix64 finalizer applied twice: once to key the cycle, once per draw.

#include <bit>
#include <cstdint>

namespace coopamc::kernels {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
inline constexpr std::uint64_t kDrawStep = 0xd1b54a32d192ed03ull;

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Per-cycle stream base; cached by callers across the draws of one cycle.
inline std::uint64_t cycle_base(std::uint64_t seed, std::uint64_t cycle) {
    return mix64(seed ^ (kGolden * (cycle + 1)));
}

inline std::uint64_t draw_bits(std::uint64_t base, std::uint64_t draw_index) {
    return mix64(base + kDrawStep * (draw_index + 1));
}

// Maps 64 random bits onto (0,1): 52-bit grid centered off the endpoints,
// so log(u) is always finite. Must stay in lockstep with the AVX2 variant,
// which builds the same double via the 2^52 bias trick.
inline double u01(std::uint64_t bits) {
    const double grid = static_cast<double>(bits >> 12);  // exact, < 2^52
    return (grid + 0.5) * 0x1.0p-52;
}

}  // namespace coopamc::kernels

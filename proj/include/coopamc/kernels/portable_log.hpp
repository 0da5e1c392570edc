#pragma once
// Natural log with a fixed, branch-free operation sequence.
//
// The simulation kernels need log() results that are bit-identical between
// the scalar reference path and the SIMD path; libm makes no such promise
// across implementations, so the kernels use this one. Domain: positive,
// finite, normal doubles (the (0,1) uniforms of rng.hpp qualify). Accuracy
// is ~1 ulp via the atanh series on a mantissa reduced to [0.6875, 1.375).
//
// Any change here must be mirrored op-for-op in the AVX2 kernel.

#include <bit>
#include <cstdint>

namespace coopamc::kernels {

inline constexpr std::uint64_t kLogMantOffset = 0x3fe6000000000000ull;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;  // 0x3fe62e42fee00000
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;  // 0x3dea39ef35793c76

// Odd-power series coefficients for 2*atanh(s): 1/3, 1/5, ..., 1/21.
inline constexpr double kLogC1 = 1.0 / 3.0;
inline constexpr double kLogC2 = 1.0 / 5.0;
inline constexpr double kLogC3 = 1.0 / 7.0;
inline constexpr double kLogC4 = 1.0 / 9.0;
inline constexpr double kLogC5 = 1.0 / 11.0;
inline constexpr double kLogC6 = 1.0 / 13.0;
inline constexpr double kLogC7 = 1.0 / 15.0;
inline constexpr double kLogC8 = 1.0 / 17.0;
inline constexpr double kLogC9 = 1.0 / 19.0;
inline constexpr double kLogC10 = 1.0 / 21.0;

inline double portable_log(double x) {
    const std::uint64_t ix = std::bit_cast<std::uint64_t>(x);
    // Pull the exponent so the mantissa lands in [0.6875, 1.375).
    const std::uint64_t tmp = ix - kLogMantOffset;
    const std::int32_t k =
        static_cast<std::int32_t>(static_cast<std::uint32_t>(tmp >> 32)) >> 20;
    const std::uint64_t iz = ix - (tmp & 0xfff0000000000000ull);
    const double z = std::bit_cast<double>(iz);

    const double f = z - 1.0;
    const double s = f / (2.0 + f);
    const double w = s * s;
    double p = kLogC10;
    p = kLogC9 + w * p;
    p = kLogC8 + w * p;
    p = kLogC7 + w * p;
    p = kLogC6 + w * p;
    p = kLogC5 + w * p;
    p = kLogC4 + w * p;
    p = kLogC3 + w * p;
    p = kLogC2 + w * p;
    p = kLogC1 + w * p;
    p = w * p;

    const double t = 2.0 * s;
    const double kd = static_cast<double>(k);
    double r = kd * kLn2Lo + t * p;
    r = r + t;
    r = r + kd * kLn2Hi;
    return r;
}

}  // namespace coopamc::kernels

// AVX2 implementation of the packet-cycle kernel, four cycles per pass.
//
// Mirrors cycle_scalar.cpp operation for operation: every floating-point op
// here is the same IEEE op, in the same order, as the scalar reference, so
// the emitted signatures are bit-identical. Terminated lanes are masked out;
// the attempt loop exits once every lane has finished. The tail that does
// not fill a vector group is delegated to the scalar kernel.

#if defined(__x86_64__) || defined(_M_X64)

#include "coopamc/kernels/cycle_kernel.hpp"

#include <immintrin.h>

#include "coopamc/kernels/portable_log.hpp"
#include "coopamc/kernels/rng.hpp"

namespace coopamc::kernels {

namespace {

inline __m256i mullo64(__m256i a, __m256i b) {
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i ah = _mm256_srli_epi64(a, 32);
    const __m256i bh = _mm256_srli_epi64(b, 32);
    const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(ah, b), _mm256_mul_epu32(a, bh));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64v(__m256i x) {
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 30));
    x = mullo64(x, _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ull)));
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 27));
    x = mullo64(x, _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebull)));
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 31));
    return x;
}

inline __m256d u01v(__m256i bits) {
    const __m256i grid = _mm256_srli_epi64(bits, 12);
    // Exact u64 -> f64 for values below 2^52.
    const __m256d wide = _mm256_sub_pd(
        _mm256_castsi256_pd(
            _mm256_or_si256(grid, _mm256_set1_epi64x(0x4330000000000000ll))),
        _mm256_set1_pd(0x1.0p52));
    return _mm256_mul_pd(_mm256_add_pd(wide, _mm256_set1_pd(0.5)),
                         _mm256_set1_pd(0x1.0p-52));
}

inline __m256d logv(__m256d x) {
    const __m256i ix = _mm256_castpd_si256(x);
    const __m256i tmp =
        _mm256_sub_epi64(ix, _mm256_set1_epi64x(static_cast<long long>(kLogMantOffset)));

    // k = ((int32)(tmp >> 32)) >> 20 per lane, then to double.
    __m256i hi = _mm256_srli_epi64(tmp, 32);
    hi = _mm256_srai_epi32(hi, 20);
    const __m256i pack = _mm256_permutevar8x32_epi32(hi, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    const __m256d kd = _mm256_cvtepi32_pd(_mm256_castsi256_si128(pack));

    const __m256i iz = _mm256_sub_epi64(
        ix, _mm256_and_si256(tmp, _mm256_set1_epi64x(static_cast<long long>(0xfff0000000000000ull))));
    const __m256d z = _mm256_castsi256_pd(iz);

    const __m256d f = _mm256_sub_pd(z, _mm256_set1_pd(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
    const __m256d w = _mm256_mul_pd(s, s);

    __m256d p = _mm256_set1_pd(kLogC10);
    p = _mm256_add_pd(_mm256_set1_pd(kLogC9), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC8), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC7), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC6), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC5), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC4), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC3), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC2), _mm256_mul_pd(w, p));
    p = _mm256_add_pd(_mm256_set1_pd(kLogC1), _mm256_mul_pd(w, p));
    p = _mm256_mul_pd(w, p);

    const __m256d t = _mm256_mul_pd(_mm256_set1_pd(2.0), s);
    __m256d r = _mm256_add_pd(_mm256_mul_pd(kd, _mm256_set1_pd(kLn2Lo)), _mm256_mul_pd(t, p));
    r = _mm256_add_pd(r, t);
    r = _mm256_add_pd(r, _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Hi)));
    return r;
}

inline __m256i select_modev(const double* thresholds, int n_modes, __m256d snr) {
    __m256i n = _mm256_setzero_si256();
    for (int k = 1; k <= n_modes; ++k) {
        const __m256d ge = _mm256_cmp_pd(snr, _mm256_set1_pd(thresholds[k]), _CMP_GE_OQ);
        n = _mm256_sub_epi64(n, _mm256_castpd_si256(ge));
    }
    return n;
}

inline __m256i blend64(__m256i keep, __m256i take, __m256i mask) {
    return _mm256_blendv_epi8(keep, take, mask);
}

inline __m256i drawv(__m256i base, std::uint64_t draw_index) {
    const std::uint64_t step = kDrawStep * (draw_index + 1);
    return mix64v(_mm256_add_epi64(base, _mm256_set1_epi64x(static_cast<long long>(step))));
}

inline bool none(__m256i mask) { return _mm256_testz_si256(mask, mask) != 0; }

void run_group(const CycleParams& p, std::uint64_t first_cycle, std::uint64_t* out) {
    __m256i cyc = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(first_cycle)),
                                   _mm256_setr_epi64x(0, 1, 2, 3));
    cyc = _mm256_add_epi64(cyc, _mm256_set1_epi64x(1));
    const __m256i keyed = _mm256_xor_si256(
        _mm256_set1_epi64x(static_cast<long long>(p.seed)),
        mullo64(cyc, _mm256_set1_epi64x(static_cast<long long>(kGolden))));
    const __m256i base = mix64v(keyed);

    // Source transmission.
    const __m256d lnu0 = logv(u01v(drawv(base, 0)));
    const __m256d snr1 = _mm256_mul_pd(_mm256_set1_pd(p.neg_mean_sd), lnu0);

    __m256i n;
    __m256i outage;
    if (p.fixed_source) {
        n = _mm256_set1_epi64x(p.fixed_source);
        outage = _mm256_setzero_si256();
    } else {
        n = select_modev(p.sd_threshold.data(), p.n_modes, snr1);
        outage = _mm256_cmpeq_epi64(n, _mm256_setzero_si256());
    }

    const __m256d lnu1 = logv(u01v(drawv(base, 1)));
    const __m256d sd_ln_a = _mm256_i64gather_pd(p.sd_ln_a.data(), n, 8);
    const __m256d sd_g = _mm256_i64gather_pd(p.sd_g.data(), n, 8);
    const __m256d sd_cut = _mm256_i64gather_pd(p.sd_cutoff.data(), n, 8);
    const __m256d sd_rhs = _mm256_sub_pd(sd_ln_a, _mm256_mul_pd(sd_g, snr1));
    const __m256i dest_fail = _mm256_castpd_si256(
        _mm256_or_pd(_mm256_cmp_pd(snr1, sd_cut, _CMP_LT_OQ),
                     _mm256_cmp_pd(lnu1, sd_rhs, _CMP_LT_OQ)));

    const __m256d u2 = u01v(drawv(base, 2));
    const __m256d eps = _mm256_i64gather_pd(p.eps.data(), n, 8);
    const __m256i relay_fail = _mm256_castpd_si256(_mm256_cmp_pd(u2, eps, _CMP_LT_OQ));

    const __m256i progressed = _mm256_andnot_si256(outage, dest_fail);
    const __m256i lost_rd = _mm256_and_si256(progressed, relay_fail);
    const __m256i to_relay = _mm256_andnot_si256(relay_fail, progressed);

    const __m256i sig_first =
        _mm256_or_si256(n, _mm256_set1_epi64x(static_cast<long long>(Outcome::DeliveredFirst) << kSigOutcomeShift));
    const __m256i sig_lost_rd =
        _mm256_or_si256(n, _mm256_set1_epi64x(static_cast<long long>(Outcome::LostRelayDecode) << kSigOutcomeShift));
    const __m256i sig_budget0 =
        _mm256_or_si256(n, _mm256_set1_epi64x(static_cast<long long>(Outcome::LostBudget) << kSigOutcomeShift));

    __m256i sig = sig_first;
    sig = blend64(sig, sig_lost_rd, lost_rd);
    __m256i active;
    if (p.nr == 0) {
        sig = blend64(sig, sig_budget0, to_relay);
        active = _mm256_setzero_si256();
    } else {
        active = to_relay;
    }
    sig = _mm256_andnot_si256(outage, sig);  // SourceOutage encodes as all-zero bits

    if (!none(active)) {
        __m256i relay_nibbles = _mm256_setzero_si256();
        for (std::uint32_t j = 1; j <= p.nr; ++j) {
            const __m256d lnua = logv(u01v(drawv(base, 2 * j + 1)));
            const __m256d tmp = _mm256_mul_pd(_mm256_set1_pd(p.neg_mean_rd), lnua);
            const __m256d snr2 = _mm256_add_pd(_mm256_set1_pd(p.relay_lo), tmp);

            const __m256i m = p.fixed_relay
                                  ? _mm256_set1_epi64x(p.fixed_relay)
                                  : select_modev(p.rd_threshold.data(), p.n_modes, snr2);
            relay_nibbles = _mm256_or_si256(
                relay_nibbles,
                _mm256_and_si256(active, _mm256_slli_epi64(m, 4 * (j - 1))));

            const __m256d lnub = logv(u01v(drawv(base, 2 * j + 2)));
            const __m256d rd_ln_a = _mm256_i64gather_pd(p.rd_ln_a.data(), m, 8);
            const __m256d rd_g = _mm256_i64gather_pd(p.rd_g.data(), m, 8);
            const __m256d rd_cut = _mm256_i64gather_pd(p.rd_cutoff.data(), m, 8);
            const __m256d rd_rhs = _mm256_sub_pd(rd_ln_a, _mm256_mul_pd(rd_g, snr2));
            const __m256i attempt_fail = _mm256_castpd_si256(
                _mm256_or_pd(_mm256_cmp_pd(snr2, rd_cut, _CMP_LT_OQ),
                             _mm256_cmp_pd(lnub, rd_rhs, _CMP_LT_OQ)));

            const __m256i delivered = _mm256_andnot_si256(attempt_fail, active);
            const __m256i sig_relay = _mm256_or_si256(
                _mm256_or_si256(
                    n, _mm256_set1_epi64x(
                           (static_cast<long long>(Outcome::DeliveredRelay) << kSigOutcomeShift) |
                           (static_cast<long long>(j) << kSigAttemptsShift))),
                _mm256_slli_epi64(relay_nibbles, kSigRelayShift));
            sig = blend64(sig, sig_relay, delivered);

            active = _mm256_and_si256(active, attempt_fail);
            if (none(active)) break;
        }
        const __m256i sig_exhaust = _mm256_or_si256(
            _mm256_or_si256(
                n, _mm256_set1_epi64x(
                       (static_cast<long long>(Outcome::LostBudget) << kSigOutcomeShift) |
                       (static_cast<long long>(p.nr) << kSigAttemptsShift))),
            _mm256_slli_epi64(relay_nibbles, kSigRelayShift));
        sig = blend64(sig, sig_exhaust, active);
    }

    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), sig);
}

}  // namespace

void run_cycles_avx2(const CycleParams& p, std::uint64_t first_cycle,
                     std::span<std::uint64_t> out) {
    size_t i = 0;
    for (; i + 4 <= out.size(); i += 4) {
        run_group(p, first_cycle + i, out.data() + i);
    }
    if (i < out.size()) {
        run_cycles_scalar(p, first_cycle + i, out.subspan(i));
    }
}

}  // namespace coopamc::kernels

#endif  // x86_64

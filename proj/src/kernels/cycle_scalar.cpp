// Scalar reference implementation of the packet-cycle kernel.
//
// Draw layout per cycle (counter-based, so unused draws cost nothing):
//   0            S-D SNR
//   1            destination decode coin for the source frame
//   2            relay decode coin
//   2j+1, 2j+2   R-D SNR and decode coin for relay attempt j = 1..nr
//
// Mode selection counts thresholds below the draw with no early exit; the
// SIMD path does the same per lane, so the two agree even on threshold ties.

#include "coopamc/kernels/cycle_kernel.hpp"

#include "coopamc/kernels/portable_log.hpp"
#include "coopamc/kernels/rng.hpp"

namespace coopamc::kernels {

namespace {

inline unsigned select_mode(const std::array<double, kMaxModes + 1>& thresholds,
                            int n_modes, double snr) {
    unsigned m = 0;
    for (int k = 1; k <= n_modes; ++k) {
        m += (snr >= thresholds[static_cast<size_t>(k)]) ? 1u : 0u;
    }
    return m;
}

inline std::uint64_t simulate_one(const CycleParams& p, std::uint64_t cycle) {
    const std::uint64_t base = cycle_base(p.seed, cycle);

    const double u0 = u01(draw_bits(base, 0));
    const double lnu0 = portable_log(u0);
    const double snr1 = p.neg_mean_sd * lnu0;

    unsigned n = p.fixed_source ? p.fixed_source : select_mode(p.sd_threshold, p.n_modes, snr1);
    if (n == 0) {
        return make_signature(Outcome::SourceOutage, 0, 0, 0);
    }

    const double lnu1 = portable_log(u01(draw_bits(base, 1)));
    const double sd_rhs = p.sd_ln_a[n] - p.sd_g[n] * snr1;
    const bool dest_fail = (snr1 < p.sd_cutoff[n]) | (lnu1 < sd_rhs);
    if (!dest_fail) {
        return make_signature(Outcome::DeliveredFirst, n, 0, 0);
    }

    const double u2 = u01(draw_bits(base, 2));
    const bool relay_fail = u2 < p.eps[n];
    if (relay_fail) {
        return make_signature(Outcome::LostRelayDecode, n, 0, 0);
    }
    if (p.nr == 0) {
        return make_signature(Outcome::LostBudget, n, 0, 0);
    }

    std::uint64_t relay_nibbles = 0;
    for (std::uint32_t j = 1; j <= p.nr; ++j) {
        const double lnua = portable_log(u01(draw_bits(base, 2 * j + 1)));
        const double tmp = p.neg_mean_rd * lnua;
        const double snr2 = p.relay_lo + tmp;

        const unsigned m =
            p.fixed_relay ? p.fixed_relay : select_mode(p.rd_threshold, p.n_modes, snr2);
        relay_nibbles |= static_cast<std::uint64_t>(m) << (4 * (j - 1));

        const double lnub = portable_log(u01(draw_bits(base, 2 * j + 2)));
        const double rd_rhs = p.rd_ln_a[m] - p.rd_g[m] * snr2;
        const bool attempt_fail = (snr2 < p.rd_cutoff[m]) | (lnub < rd_rhs);
        if (!attempt_fail) {
            return make_signature(Outcome::DeliveredRelay, n, j, relay_nibbles);
        }
    }
    return make_signature(Outcome::LostBudget, n, p.nr, relay_nibbles);
}

}  // namespace

void run_cycles_scalar(const CycleParams& p, std::uint64_t first_cycle,
                       std::span<std::uint64_t> out) {
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = simulate_one(p, first_cycle + i);
    }
}

}  // namespace coopamc::kernels

#include "coopamc/channel_model.hpp"

#include <cmath>
#include <stdexcept>

#include "coopamc/kernels/portable_log.hpp"
#include "coopamc/kernels/rng.hpp"

namespace coopamc {

namespace {
// Slack for tables transcribed from published fits, where the cutoff in dB
// has been rounded.
constexpr double kCutoffSlack = 1e-9;
}  // namespace

void AmcMode::validate() const {
    if (index < 1) throw std::invalid_argument("AmcMode: index must be >= 1");
    if (!(rate > 0.0)) throw std::invalid_argument("AmcMode: rate must be > 0");
    if (!(fit_a >= 0.0)) throw std::invalid_argument("AmcMode: a must be >= 0");
    if (!(fit_g > 0.0)) throw std::invalid_argument("AmcMode: g must be > 0");
    if (!(cutoff >= 0.0)) throw std::invalid_argument("AmcMode: cutoff must be >= 0");
    if (fit_a > 0.0 && fit_a * std::exp(-fit_g * cutoff) > 1.0 + kCutoffSlack) {
        throw std::invalid_argument(
            "AmcMode: PER fit exceeds 1 at the cutoff; cutoff must be >= ln(a)/g");
    }
}

void ModeTable::validate() const {
    if (modes.empty()) throw std::invalid_argument("ModeTable: at least one mode required");
    if (modes.size() > 15) throw std::invalid_argument("ModeTable: at most 15 modes supported");
    if (packet_bits < 1) throw std::invalid_argument("ModeTable: packet_bits must be >= 1");
    double prev_rate = 0.0;
    int expected = 1;
    for (const AmcMode& m : modes) {
        m.validate();
        if (m.index != expected) {
            throw std::invalid_argument("ModeTable: mode indices must be 1..N in order");
        }
        if (!(m.rate > prev_rate)) {
            throw std::invalid_argument("ModeTable: rates must be strictly increasing");
        }
        prev_rate = m.rate;
        ++expected;
    }
}

void Topology::validate() const {
    if (!(pbar > 0.0)) throw std::invalid_argument("Topology: pbar must be > 0");
    if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("Topology: d must be in [0, 1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("Topology: alpha must be > 0");
}

double per_instant(const AmcMode& mode, double snr) {
    if (snr < mode.cutoff) return 1.0;
    const double v = mode.fit_a * std::exp(-mode.fit_g * snr);
    return v < 1.0 ? v : 1.0;
}

double rayleigh_interval_prob(double mean_snr, double lo, double hi) {
    if (!(mean_snr > 0.0)) throw std::invalid_argument("rayleigh_interval_prob: mean_snr must be > 0");
    if (!(lo >= 0.0) || lo > hi) throw std::invalid_argument("rayleigh_interval_prob: invalid interval");
    const double hi_term = std::isinf(hi) ? 0.0 : std::exp(-hi / mean_snr);
    return std::exp(-lo / mean_snr) - hi_term;
}

double interval_avg_per(const AmcMode& mode, double mean_snr, double lo, double hi) {
    if (!(mean_snr > 0.0)) throw std::invalid_argument("interval_avg_per: mean_snr must be > 0");
    if (!(lo >= mode.cutoff - kCutoffSlack)) {
        throw std::invalid_argument("interval_avg_per: interval starts below the mode cutoff");
    }
    if (!(lo < hi)) throw std::invalid_argument("interval_avg_per: degenerate interval");

    // Conditional mean of a*exp(-g*snr) over [lo, hi), factored so the
    // exponentials never underflow against each other:
    //   a*exp(-g*lo)/(1+g*mean) * (1 - e^{-(g+1/mean)(hi-lo)}) / (1 - e^{-(hi-lo)/mean})
    const double decay = mode.fit_g + 1.0 / mean_snr;
    double ratio;
    if (std::isinf(hi)) {
        ratio = 1.0;
    } else {
        const double width = hi - lo;
        ratio = -std::expm1(-decay * width) / -std::expm1(-width / mean_snr);
    }
    const double v = mode.fit_a * std::exp(-mode.fit_g * lo) / (1.0 + mode.fit_g * mean_snr) * ratio;
    return v < 1.0 ? v : 1.0;
}

double full_avg_per(const AmcMode& mode, double mean_snr) {
    if (!(mean_snr > 0.0)) throw std::invalid_argument("full_avg_per: mean_snr must be > 0");
    const double below = -std::expm1(-mode.cutoff / mean_snr);
    const double above = mode.fit_a / (1.0 + mode.fit_g * mean_snr) *
                         std::exp(-(mode.fit_g + 1.0 / mean_snr) * mode.cutoff);
    const double v = below + above;
    return v < 1.0 ? v : 1.0;
}

LinkSnrs derive_topology(const Topology& t) {
    t.validate();
    const double mean_sd = t.pbar;
    const double mean_rd = t.pbar * std::pow(1.0 - t.d, -t.alpha);
    const double snr_sr = t.d == 0.0 ? kInf : t.pbar * std::pow(t.d, -t.alpha);
    return {mean_sd, mean_rd, snr_sr};
}

double sr_packet_error(const AmcMode& mode, double snr_sr) {
    if (std::isinf(snr_sr)) return 0.0;
    return per_instant(mode, snr_sr);
}

SnrStream::SnrStream(std::uint64_t seed, std::uint64_t stream_id)
    : base_(kernels::cycle_base(seed, stream_id)) {}

double SnrStream::draw(double mean_snr) {
    const double u = kernels::u01(kernels::draw_bits(base_, counter_++));
    return -mean_snr * kernels::portable_log(u);
}

}  // namespace coopamc

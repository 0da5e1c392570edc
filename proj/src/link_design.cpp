#include "coopamc/link_design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coopamc {

double threshold_for_target(const AmcMode& mode, double p_t) {
    if (!(p_t > 0.0 && p_t < 1.0)) {
        throw std::invalid_argument("threshold_for_target: p_t must be in (0, 1)");
    }
    if (mode.fit_a == 0.0) return mode.cutoff;  // error-free above the cutoff
    const double inv = std::log(mode.fit_a / p_t) / mode.fit_g;
    return inv > mode.cutoff ? inv : mode.cutoff;
}

namespace {

// Conditional mean PER over [lo, hi) including any below-cutoff mass where
// the PER is 1. Designed links always start at or above the cutoff; the
// degenerate full-range designs of the fixed-rate benchmark do not.
double range_avg_per(const AmcMode& mode, double mean_snr, double lo, double hi) {
    if (lo >= mode.cutoff) return interval_avg_per(mode, mean_snr, lo, hi);
    const double total = rayleigh_interval_prob(mean_snr, lo, hi);
    const double below = rayleigh_interval_prob(mean_snr, lo, std::min(hi, mode.cutoff));
    double above = 0.0;
    if (hi > mode.cutoff) {
        above = rayleigh_interval_prob(mean_snr, mode.cutoff, hi) *
                interval_avg_per(mode, mean_snr, mode.cutoff, hi);
    }
    return (below + above) / total;
}

// Fills probabilities and per-mode PERs for already-chosen effective edges.
void fill_statistics(LinkDesign& d, const ModeTable& table) {
    const int n = table.size();
    d.mode_prob.assign(static_cast<size_t>(n) + 1, 0.0);
    d.mode_avg_per.assign(static_cast<size_t>(n), 0.0);
    d.rates.clear();
    d.rates.reserve(static_cast<size_t>(n));
    for (const AmcMode& m : table.modes) d.rates.push_back(m.rate);

    d.mode_prob[0] = rayleigh_interval_prob(d.mean_snr, 0.0, d.thresholds.front());
    for (int k = 1; k <= n; ++k) {
        if (!d.active[static_cast<size_t>(k - 1)]) continue;
        const double lo = d.thresholds[static_cast<size_t>(k - 1)];
        const double hi = k < n ? d.thresholds[static_cast<size_t>(k)] : kInf;
        d.mode_prob[static_cast<size_t>(k)] = rayleigh_interval_prob(d.mean_snr, lo, hi);
        d.mode_avg_per[static_cast<size_t>(k - 1)] =
            range_avg_per(table.mode(k), d.mean_snr, lo, hi);
    }
}

}  // namespace

LinkDesign design_link(const ModeTable& table, double mean_snr, double p_t) {
    table.validate();
    if (!(mean_snr > 0.0)) throw std::invalid_argument("design_link: mean_snr must be > 0");
    if (!(p_t > 0.0 && p_t < 1.0)) throw std::invalid_argument("design_link: p_t must be in (0, 1)");

    const int n = table.size();
    LinkDesign d;
    d.target_per = p_t;
    d.mean_snr = mean_snr;
    d.thresholds.assign(static_cast<size_t>(n), 0.0);
    d.active.assign(static_cast<size_t>(n), true);

    // A mode is dominated when some higher-rate mode meets the target at an
    // equal or lower SNR; its interval collapses onto that mode's edge.
    double edge_above = kInf;
    for (int k = n; k >= 1; --k) {
        const double t = threshold_for_target(table.mode(k), p_t);
        if (t < edge_above) {
            d.thresholds[static_cast<size_t>(k - 1)] = t;
            edge_above = t;
        } else {
            d.thresholds[static_cast<size_t>(k - 1)] = edge_above;
            d.active[static_cast<size_t>(k - 1)] = false;
        }
    }

    fill_statistics(d, table);
    return d;
}

LinkDesign rebuild_from_thresholds(const ModeTable& table, double mean_snr,
                                   double target_per, const std::vector<double>& thresholds) {
    table.validate();
    if (thresholds.size() != static_cast<size_t>(table.size())) {
        throw std::invalid_argument("rebuild_from_thresholds: threshold count != mode count");
    }
    LinkDesign d;
    d.target_per = target_per;
    d.mean_snr = mean_snr;
    d.thresholds = thresholds;
    d.active.assign(thresholds.size(), true);
    for (size_t k = 0; k + 1 < thresholds.size(); ++k) {
        if (!(thresholds[k] <= thresholds[k + 1])) {
            throw std::invalid_argument("rebuild_from_thresholds: thresholds must be non-decreasing");
        }
        if (thresholds[k] == thresholds[k + 1]) d.active[k] = false;
    }
    for (size_t k = 0; k < thresholds.size(); ++k) {
        if (std::isinf(thresholds[k])) d.active[k] = false;  // zero-mass interval
    }
    fill_statistics(d, table);
    return d;
}

LinkDesign fixed_mode_design(const ModeTable& table, int n, double mean_snr) {
    table.validate();
    if (n < 1 || n > table.size()) throw std::invalid_argument("fixed_mode_design: bad mode index");
    if (!(mean_snr > 0.0)) throw std::invalid_argument("fixed_mode_design: mean_snr must be > 0");

    const int count = table.size();
    LinkDesign d;
    d.target_per = 1.0;
    d.mean_snr = mean_snr;
    d.thresholds.assign(static_cast<size_t>(count), kInf);
    d.active.assign(static_cast<size_t>(count), false);
    d.mode_prob.assign(static_cast<size_t>(count) + 1, 0.0);
    d.mode_avg_per.assign(static_cast<size_t>(count), 0.0);
    d.rates.clear();
    d.rates.reserve(static_cast<size_t>(count));
    for (const AmcMode& m : table.modes) d.rates.push_back(m.rate);
    for (int k = 1; k <= n; ++k) d.thresholds[static_cast<size_t>(k - 1)] = 0.0;
    d.active[static_cast<size_t>(n - 1)] = true;
    d.mode_prob[static_cast<size_t>(n)] = 1.0;
    d.mode_avg_per[static_cast<size_t>(n - 1)] = full_avg_per(table.mode(n), mean_snr);
    return d;
}

double avg_sr_eps(const LinkDesign& design_sd, const std::vector<double>& eps) {
    if (eps.size() != static_cast<size_t>(design_sd.n_modes())) {
        throw std::invalid_argument("avg_sr_eps: eps size != mode count");
    }
    double num = 0.0;
    double den = 0.0;
    for (int k = 1; k <= design_sd.n_modes(); ++k) {
        const double p = design_sd.prob(k);
        num += eps[static_cast<size_t>(k - 1)] * p;
        den += p;
    }
    if (den <= 0.0) throw std::domain_error("avg_sr_eps: design is entirely in outage");
    return num / den;
}

std::vector<double> sr_eps_vector(const ModeTable& table, double snr_sr) {
    std::vector<double> eps;
    eps.reserve(static_cast<size_t>(table.size()));
    for (const AmcMode& m : table.modes) eps.push_back(sr_packet_error(m, snr_sr));
    return eps;
}

}  // namespace coopamc

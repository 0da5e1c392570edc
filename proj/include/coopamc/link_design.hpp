#pragma once
// Switching-threshold design for one fading link: pick per-mode thresholds
// so the instantaneous PER never exceeds the target inside each interval,
// then record the induced mode probabilities and exact per-mode average PERs
// consumed by every closed-form expression downstream.

#include <vector>

#include "coopamc/channel_model.hpp"

namespace coopamc {

struct LinkDesign {
    // Effective switching edges, one per mode (index 0 of the SNR axis is
    // the outage region below thresholds[0]). Non-decreasing; a dominated
    // mode's edge collapses onto the next active mode's edge.
    std::vector<double> thresholds;   // size N, linear SNR, thresholds[n-1] for mode n
    std::vector<bool> active;         // size N; false = empty interval
    std::vector<double> mode_prob;    // size N+1; [0] = outage probability
    std::vector<double> mode_avg_per; // size N; 0 for inactive modes
    std::vector<double> rates;        // size N, bits per symbol, copied from the table
    double target_per = 0.0;
    double mean_snr = 0.0;

    int n_modes() const { return static_cast<int>(thresholds.size()); }
    double rate(int n) const { return rates.at(static_cast<size_t>(n - 1)); }
    double outage_prob() const { return mode_prob.at(0); }
    // P(mode n), n = 1..N.
    double prob(int n) const { return mode_prob.at(static_cast<size_t>(n)); }
    double avg_per(int n) const { return mode_avg_per.at(static_cast<size_t>(n - 1)); }
};

// Smallest SNR at which the mode's instantaneous PER is <= p_t, clamped to
// the fit's cutoff.
double threshold_for_target(const AmcMode& mode, double p_t);

// Designs the link for target per-mode PER p_t over an exponential SNR law
// with the given mean. Dominated modes (a higher-rate mode reaches the
// target at a lower SNR) get empty intervals. Throws on p_t outside (0,1)
// or an invalid table.
LinkDesign design_link(const ModeTable& table, double mean_snr, double p_t);

// Recomputes probabilities and per-mode PERs from the stored thresholds;
// used to audit serialized designs.
LinkDesign rebuild_from_thresholds(const ModeTable& table, double mean_snr,
                                   double target_per, const std::vector<double>& thresholds);

// Degenerate design that transmits mode n over the whole SNR range: the
// no-CSI operating point of the fixed-rate benchmark. Outage probability is
// zero and the mode's average PER includes the below-cutoff region.
LinkDesign fixed_mode_design(const ModeTable& table, int n, double mean_snr);

// Mode-probability-weighted mean of the per-mode source-relay error rates,
// conditioned on a transmission happening. eps has one entry per mode 1..N.
double avg_sr_eps(const LinkDesign& design_sd, const std::vector<double>& eps);

// eps_n = sr_packet_error(mode n, snr_sr) for every mode of the table.
std::vector<double> sr_eps_vector(const ModeTable& table, double snr_sr);

}  // namespace coopamc

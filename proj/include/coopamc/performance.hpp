#pragma once
// Closed-form spectral efficiency and packet loss rate for adaptive
// cooperative ARQ, traditional ARQ, AMC without retransmission, and the
// fixed-rate benchmark.

#include <vector>

#include "coopamc/channel_model.hpp"
#include "coopamc/link_design.hpp"

namespace coopamc {

// How the relay's per-attempt mode distribution treats its outage region.
enum class RelayModePolicy {
    // Relay holds the packet through outage frames and transmits on the next
    // usable one; attempts follow the conditional non-outage distribution.
    ConditionalWait,
    // An outage frame consumes an attempt: no symbols, certain failure.
    CountAttempt,
    // Raw non-outage probabilities with the missing mass dropped. Kept only
    // to probe the unnormalized reading of the efficiency expression; not a
    // physical protocol.
    UnnormalizedLiteral,
};

// Which form of the single-retransmission loss expression to evaluate. The
// two differ in whether the no-relay-decode weight is also applied to the
// both-links-fail product; FullAverage is the protocol-exact form and the
// simulator-backed default.
enum class PlrVariant {
    FullAverage,
    DecodeWeighted,
};

struct PerformanceReport {
    double eta = 0.0;       // bits per symbol
    double plr = 0.0;
    bool feasible = false;  // plr <= target loss rate
    int nr = 0;
    double eps_bar = 0.0;
};

// Terminal-event probabilities of one packet cycle, conditioned on the
// source actually transmitting. delivered_relay_at[l-1] is the probability
// the relay's l-th attempt delivers the packet.
struct CycleEventProbs {
    double delivered_first = 0.0;
    double lost_relay_decode = 0.0;
    std::vector<double> delivered_relay_at;
    double budget_exhausted = 0.0;  // all nr attempts transmitted and failed
    double total() const;
};

// Average transmitted information bits per symbol for the adaptive
// cooperative scheme, by direct enumeration of attempt sequences. eps holds
// the relay-decode failure probability per source mode. nr <= 4.
double eta_cooperative(const LinkDesign& design_sd, const LinkDesign& design_rd,
                       const std::vector<double>& eps, int nr,
                       RelayModePolicy policy = RelayModePolicy::ConditionalWait);

// Average system packet loss rate for a single relay retransmission.
double plr_cooperative(const LinkDesign& design_sd, const LinkDesign& design_rd,
                       const std::vector<double>& eps,
                       PlrVariant variant = PlrVariant::FullAverage);

// Loss rate with an attempt budget of nr under the given relay policy;
// reduces to plr_cooperative(FullAverage) at nr = 1 with ConditionalWait.
double plr_truncated(const LinkDesign& design_sd, const LinkDesign& design_rd,
                     const std::vector<double>& eps, int nr,
                     RelayModePolicy policy = RelayModePolicy::ConditionalWait);

// Traditional ARQ: the source retransmits over the same fading statistics,
// with independent draws per attempt.
double eta_traditional(const LinkDesign& design, int nr);

// No retransmission at all: every transmitted packet counts its bits once.
double eta_amc_only(const LinkDesign& design_sd);

// Fixed-rate benchmark, single relay retransmission.
double eta_fixed(int n, int m, double mean_sd, double mean_rd, double snr_sr,
                 const ModeTable& table);
double plr_fixed(int n, int m, double mean_sd, double mean_rd, double snr_sr,
                 const ModeTable& table);

// Event-class probabilities matching the simulator's tallies.
CycleEventProbs cycle_event_probs(const LinkDesign& design_sd, const LinkDesign& design_rd,
                                  const std::vector<double>& eps, int nr,
                                  RelayModePolicy policy = RelayModePolicy::ConditionalWait);

}  // namespace coopamc

#pragma once
// Target-PER split search for the adaptive cooperative scheme, exhaustive
// mode selection for the fixed-rate benchmark, the feasibility power
// threshold, and the common-target baseline.

#include <optional>
#include <vector>

#include "coopamc/channel_model.hpp"
#include "coopamc/link_design.hpp"
#include "coopamc/performance.hpp"

namespace coopamc {

enum class CandidateStatus {
    Feasible,
    PlrInfeasible,        // designed, but the exact loss rate misses the target
    SkippedRdNonpositive, // relay target from the split came out <= 0
    SkippedRdTooLarge,    // relay target came out >= 1
};

struct CandidateTrace {
    double p_t_sd = 0.0;
    double p_t_rd = 0.0;
    double eta = 0.0;
    double plr = 0.0;
    bool feasible = false;
    CandidateStatus status = CandidateStatus::SkippedRdNonpositive;
};

struct OptimizedSystem {
    double p_t_sd_star = 0.0;
    double p_t_rd_star = 0.0;
    LinkDesign design_sd;
    LinkDesign design_rd;
    PerformanceReport report;
    std::vector<CandidateTrace> search_trace;
};

// Search grid over the source target PER, log-spaced strictly inside
// (p_loss, 1). The equal-split point p_loss^(1/(nr+1)) is always included
// so the common-target baseline is representable exactly.
struct GridSpec {
    int points = 200;
};

struct AdaptiveSearchResult {
    std::optional<OptimizedSystem> best;  // empty = no feasible candidate
    std::vector<CandidateTrace> trace;
    bool feasible() const { return best.has_value(); }
};

struct FixedChoice {
    int n_star = 0;
    int m_star = 0;
    double eta = 0.0;
    double plr = 0.0;
    bool feasible = false;
};

// Grid search over the source target PER: design the source link, average
// the source-relay error, split the loss budget onto the relay target,
// design the relay link, and keep the feasible candidate with the highest
// spectral efficiency. Feasibility is re-verified against the exact
// closed-form loss rate of the resulting designs, not the nominal targets.
AdaptiveSearchResult optimize_adaptive(const ModeTable& table, const Topology& topology,
                                       double p_loss, const GridSpec& grid = {}, int nr = 1);

// Exhaustive search over fixed source/relay mode pairs.
FixedChoice optimize_fixed(const ModeTable& table, const Topology& topology, double p_loss);

// Smallest mean transmit SNR (linear) at which the fixed pair (n, m) meets
// the loss constraint, by bisection over [bracket_lo_db, bracket_hi_db].
// Throws when the bracket does not straddle the constraint.
double power_threshold(const ModeTable& table, int n, int m, double d, double alpha,
                       double p_loss, double bracket_lo_db, double bracket_hi_db,
                       double tol_db = 1e-6);

struct BaselineResult {
    double p_t = 0.0;
    LinkDesign design;
    PerformanceReport report;
};

// Common-target traditional ARQ baseline: one design at p_loss^(1/(nr+1))
// reused for the first transmission and every retransmission.
BaselineResult baseline_equal_target(const ModeTable& table, const Topology& topology,
                                     double p_loss, int nr);

}  // namespace coopamc

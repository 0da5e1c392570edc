#pragma once
// Batch sweep driver: evaluates the configured schemes over a transmit-SNR
// range and renders plot-ready CSV or JSON rows. Each JSON row embeds the
// designs it was computed from, so analytic values are recomputable from the
// output alone.

#include <cstdint>
#include <string>
#include <vector>

#include "coopamc/io.hpp"
#include "coopamc/optimizer.hpp"
#include "coopamc/sim.hpp"

namespace coopamc {

// Scheme identifiers accepted in sweep specs.
inline constexpr const char* kSchemeJointAdaptive = "joint-adaptive";
inline constexpr const char* kSchemeAmcOnly = "amc-only";
inline constexpr const char* kSchemeFixedCoop = "fixed-coop";
inline constexpr const char* kSchemeTraditional = "traditional";
inline constexpr const char* kSchemeBaseline = "baseline-equal-target";

struct SweepSpec {
    double start_db = 0.0;
    double stop_db = 30.0;
    double step_db = 0.5;
    double d = 0.2;
    double alpha = 4.0;
    double p_loss = 1e-3;
    int nr = 1;
    int grid_points = 200;
    std::vector<std::string> schemes{kSchemeJointAdaptive, kSchemeAmcOnly};
    std::uint64_t sim_packets = 0;  // 0 = analytic only
    std::uint64_t seed = 1;
    OutagePolicy policy = OutagePolicy::Wait;

    void validate() const;
};

struct SweepRow {
    double pbar_db = 0.0;
    std::string scheme;
    bool feasible = false;
    double eta = 0.0;
    double plr = 0.0;
    int nr = 0;

    bool has_sim = false;
    double eta_hat = 0.0;
    double eta_se = 0.0;
    double plr_hat = 0.0;
    double plr_se = 0.0;

    // Operating point behind the analytic numbers; empty when infeasible.
    bool has_designs = false;
    LinkDesign design_sd;
    LinkDesign design_rd;
    std::vector<double> eps;
};

std::vector<SweepRow> run_sweep(const ModeTable& table, const SweepSpec& spec);

// Fixed column order; simulation columns stay empty without sim_packets.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
io::json sweep_to_json(const ModeTable& table, const SweepSpec& spec,
                       const std::vector<SweepRow>& rows);

// True when some requested scheme has no feasible row at all.
bool any_scheme_infeasible_everywhere(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace coopamc

#pragma once
// Frame-level Monte Carlo simulation of the cooperative ARQ protocol under
// Rayleigh block fading: the independent oracle for every closed-form
// expression in this library.
//
// Randomness is counter-based per cycle index, so a run partitioned across
// any contiguous ranges merges back to the serial result bit for bit. All
// statistics are derived from integer tallies of per-cycle terminal-event
// signatures, which makes merging exact, associative and commutative.

#include <cstdint>
#include <map>
#include <vector>

#include "coopamc/channel_model.hpp"
#include "coopamc/kernels/cycle_kernel.hpp"
#include "coopamc/link_design.hpp"

namespace coopamc {

enum class OutagePolicy {
    Wait,          // relay holds the packet through outage frames (no symbol cost)
    CountAttempt,  // an outage frame consumes the attempt: no symbols, certain failure
};

enum class SimModeKind { Adaptive, Fixed };

struct SimConfig {
    std::uint64_t packets = 0;
    std::uint64_t seed = 0;
    int nr = 1;
    OutagePolicy policy = OutagePolicy::Wait;

    SimModeKind kind = SimModeKind::Adaptive;
    LinkDesign design_sd;  // Adaptive
    LinkDesign design_rd;
    int fixed_n = 0;  // Fixed
    int fixed_m = 0;

    void validate(const ModeTable& table) const;
};

struct EventCounts {
    std::uint64_t source_outage = 0;
    std::uint64_t delivered_first = 0;
    std::uint64_t lost_relay_decode = 0;
    std::vector<std::uint64_t> delivered_relay_at;  // index l-1, size nr
    std::uint64_t lost_budget = 0;
};

struct SimStats {
    // Run identity; merge requires everything here except seed to agree.
    std::uint64_t packets = 0;
    std::uint64_t seed = 0;
    int nr = 0;
    OutagePolicy policy = OutagePolicy::Wait;
    SimModeKind kind = SimModeKind::Adaptive;
    int fixed_n = 0;
    int fixed_m = 0;
    int packet_bits = 0;
    std::vector<double> inv_rates;  // 1/R per mode; turns signatures back into symbol costs

    // Exact integer tallies keyed by canonical terminal-event signature.
    std::map<std::uint64_t, std::uint64_t> signature_counts;

    // Derived estimates, recomputed from the tallies in key order.
    double eta_hat = 0.0;   // mean transmitted bits per symbol over all cycles
    double eta_se = 0.0;
    double plr_hat = 0.0;   // losses / transmitted packets
    double plr_se = 0.0;
    double goodput = 0.0;   // delivered bits per symbol, same averaging as eta_hat
    EventCounts counts;
    std::uint64_t transmitted = 0;
    std::uint64_t delivered = 0;
    std::uint64_t losses = 0;
};

// Simulates config.packets cycles starting at global cycle index 0.
SimStats simulate(const ModeTable& table, const Topology& topology, const SimConfig& config);

// Simulates the cycle range [first_cycle, first_cycle + count); partitioning
// [0, packets) across calls and merging reproduces simulate() exactly.
SimStats simulate_range(const ModeTable& table, const Topology& topology,
                        const SimConfig& config, std::uint64_t first_cycle,
                        std::uint64_t count);

// Pools two runs of identical shape. Counts add exactly; the estimates are
// recomputed from the pooled tallies, so merging is associative and
// commutative bit for bit.
SimStats merge_stats(const SimStats& a, const SimStats& b);

// Flattened kernel inputs for a run; exposed so the kernel variants can be
// driven and compared directly.
kernels::CycleParams make_cycle_params(const ModeTable& table, const Topology& topology,
                                       const SimConfig& config);

}  // namespace coopamc

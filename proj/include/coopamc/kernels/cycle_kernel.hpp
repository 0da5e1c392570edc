#pragma once
// Batch kernel for one cooperative-ARQ packet cycle.
//
// The kernel runs the whole per-packet protocol (source transmission, relay
// decode, up to nr relay attempts) for a contiguous range of cycle indices
// and emits one compact integer signature per cycle. Everything statistical
// is derived from signatures later, so the scalar reference kernel and the
// SIMD variants must produce bit-identical signature arrays; the equivalence
// tests enforce that.

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace coopamc::kernels {

// Up to 15 real modes plus the index-0 outage slot.
inline constexpr int kMaxModes = 15;
inline constexpr std::uint32_t kMaxAttempts = 12;  // nibble-packed into the signature

enum class Outcome : std::uint8_t {
    SourceOutage = 0,    // S-D SNR below the lowest threshold; nothing sent
    DeliveredFirst = 1,  // destination decoded the source transmission
    LostRelayDecode = 2, // destination failed and the relay failed to decode
    DeliveredRelay = 3,  // a relay attempt succeeded
    LostBudget = 4,      // all allowed attempts consumed without delivery
};

// Signature layout (low to high): source mode (4 bits), outcome (3),
// attempts used (4), then one nibble per relay attempt's mode from bit 12
// (mode 0 = relay outage under the count-attempt policy).
inline constexpr int kSigModeBits = 4;
inline constexpr int kSigOutcomeShift = 4;
inline constexpr int kSigAttemptsShift = 7;
inline constexpr int kSigRelayShift = 12;

inline std::uint64_t make_signature(Outcome o, unsigned source_mode, unsigned attempts,
                                    std::uint64_t relay_nibbles) {
    return static_cast<std::uint64_t>(source_mode) |
           (static_cast<std::uint64_t>(o) << kSigOutcomeShift) |
           (static_cast<std::uint64_t>(attempts) << kSigAttemptsShift) |
           (relay_nibbles << kSigRelayShift);
}

inline unsigned sig_source_mode(std::uint64_t s) { return s & 0xf; }
inline Outcome sig_outcome(std::uint64_t s) {
    return static_cast<Outcome>((s >> kSigOutcomeShift) & 0x7);
}
inline unsigned sig_attempts(std::uint64_t s) { return (s >> kSigAttemptsShift) & 0xf; }
inline unsigned sig_relay_mode(std::uint64_t s, unsigned attempt) {
    return (s >> (kSigRelayShift + 4 * attempt)) & 0xf;
}

// Flattened per-link parameters, index 0 reserved for the outage slot.
// Tables are padded so out-of-range gathers stay harmless.
struct CycleParams {
    int n_modes = 0;

    // Source-destination link.
    std::array<double, kMaxModes + 1> sd_threshold{};  // effective switching edges
    std::array<double, kMaxModes + 1> sd_ln_a{};
    std::array<double, kMaxModes + 1> sd_g{};
    std::array<double, kMaxModes + 1> sd_cutoff{};

    // Relay-destination link.
    std::array<double, kMaxModes + 1> rd_threshold{};
    std::array<double, kMaxModes + 1> rd_ln_a{};
    std::array<double, kMaxModes + 1> rd_g{};
    std::array<double, kMaxModes + 1> rd_cutoff{};  // [0] = +inf forces outage-attempt failure

    std::array<double, kMaxModes + 1> eps{};  // relay decode failure prob per source mode

    double neg_mean_sd = -1.0;  // -(mean S-D SNR): one multiply turns -log(u) draws into SNRs
    double neg_mean_rd = -1.0;
    double relay_lo = 0.0;      // lowest R-D switching edge under the wait policy, else 0

    std::uint64_t seed = 0;
    std::uint32_t nr = 0;             // relay attempt budget, <= kMaxAttempts
    std::uint8_t fixed_source = 0;    // mode index, 0 = adaptive selection
    std::uint8_t fixed_relay = 0;
};

// Simulates cycles [first_cycle, first_cycle + out.size()) into out.
using CycleKernelFn = void (*)(const CycleParams&, std::uint64_t first_cycle,
                               std::span<std::uint64_t> out);

void run_cycles_scalar(const CycleParams& p, std::uint64_t first_cycle,
                       std::span<std::uint64_t> out);
#if defined(__x86_64__) || defined(_M_X64)
void run_cycles_avx2(const CycleParams& p, std::uint64_t first_cycle,
                     std::span<std::uint64_t> out);
#endif

// Best kernel for this machine, resolved once at first use.
CycleKernelFn select_cycle_kernel();
const std::string& cycle_kernel_name();

}  // namespace coopamc::kernels

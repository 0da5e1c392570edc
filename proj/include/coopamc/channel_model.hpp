#pragma once
// AMC transmission modes, the exponential PER approximation, Rayleigh
// block-fading statistics and the line-topology SNR mapping.
//
// All SNR quantities are linear; dB conversion happens at the CLI/file
// boundary only.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace coopamc {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// One transmission mode: information rate plus the fitted PER law
//   PER_n(snr) = 1                      for snr <  cutoff
//              = fit_a * exp(-fit_g*snr) for snr >= cutoff
struct AmcMode {
    int index = 0;        // 1-based mode number
    std::string name;     // optional label, e.g. "QPSK 3/4"
    double rate = 0.0;    // information bits per symbol, > 0
    double fit_a = 0.0;   // PER fit amplitude, > 0
    double fit_g = 0.0;   // PER fit decay per unit linear SNR, > 0
    double cutoff = 0.0;  // linear SNR below which PER = 1

    // Throws std::invalid_argument when a field is out of range or the fit
    // exceeds 1 on its valid region (cutoff must be >= ln(fit_a)/fit_g for
    // fit_a > 1, up to a small numeric slack).
    void validate() const;
};

// Ordered mode set for one link, lowest rate first.
struct ModeTable {
    std::vector<AmcMode> modes;  // indices 1..N, rates strictly increasing
    int packet_bits = 1080;

    int size() const { return static_cast<int>(modes.size()); }
    const AmcMode& mode(int n) const { return modes.at(static_cast<size_t>(n - 1)); }
    void validate() const;
};

// Transmit power and relay placement on the unit source-destination line.
struct Topology {
    double pbar = 1.0;   // mean transmit SNR reference, linear, > 0
    double d = 0.0;      // normalized source-relay distance, in [0, 1)
    double alpha = 4.0;  // path-loss exponent, > 0

    void validate() const;
};

struct LinkSnrs {
    double mean_sd;   // mean S-D SNR
    double mean_rd;   // mean R-D SNR
    double snr_sr;    // fixed S-R SNR; +inf when d = 0
};

// PER_n at a given instantaneous SNR. Total on valid modes; clamped to [0,1].
double per_instant(const AmcMode& mode, double snr);

// P(lo <= snr < hi) for exponentially distributed SNR with the given mean.
// hi may be +inf. Throws on an invalid interval.
double rayleigh_interval_prob(double mean_snr, double lo, double hi);

// Mean of PER_n over [lo, hi) under the exponential SNR law, conditioned on
// the SNR falling in the interval. Requires lo >= mode.cutoff and lo < hi.
double interval_avg_per(const AmcMode& mode, double mean_snr, double lo, double hi);

// Mean of PER_n over the whole SNR range [0, inf), including the PER = 1
// region below the cutoff.
double full_avg_per(const AmcMode& mode, double mean_snr);

// Mean link SNRs induced by the topology. d = 0 yields snr_sr = +inf.
LinkSnrs derive_topology(const Topology& t);

// Packet error probability of the fixed-SNR source-relay link in this mode.
double sr_packet_error(const AmcMode& mode, double snr_sr);

// Deterministic stream of exponential SNR draws. Counter-based: the k-th
// draw from a given (seed, stream) pair is a pure function of (seed, stream,
// k), so independent streams never interact.
class SnrStream {
public:
    SnrStream(std::uint64_t seed, std::uint64_t stream_id = 0);
    double draw(double mean_snr);

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace coopamc

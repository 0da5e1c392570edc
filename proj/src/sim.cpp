#include "coopamc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "coopamc/kernels/cycle_kernel.hpp"

namespace coopamc {

namespace kn = kernels;

void SimConfig::validate(const ModeTable& table) const {
    table.validate();
    if (packets < 1) throw std::invalid_argument("SimConfig: packets must be >= 1");
    if (nr < 0 || static_cast<std::uint32_t>(nr) > kn::kMaxAttempts) {
        throw std::invalid_argument("SimConfig: nr must be in [0, 12]");
    }
    if (kind == SimModeKind::Adaptive) {
        if (design_sd.n_modes() != table.size() || design_rd.n_modes() != table.size()) {
            throw std::invalid_argument("SimConfig: designs do not match the mode table");
        }
    } else {
        if (fixed_n < 1 || fixed_n > table.size() || fixed_m < 1 || fixed_m > table.size()) {
            throw std::invalid_argument("SimConfig: fixed mode indices out of range");
        }
    }
}

kernels::CycleParams make_cycle_params(const ModeTable& table, const Topology& topology,
                                       const SimConfig& cfg) {
    const LinkSnrs snrs = derive_topology(topology);

    kn::CycleParams p;
    p.n_modes = table.size();
    p.seed = cfg.seed;
    p.nr = static_cast<std::uint32_t>(cfg.nr);
    p.neg_mean_sd = -snrs.mean_sd;
    p.neg_mean_rd = -snrs.mean_rd;
    p.rd_cutoff[0] = kInf;  // outage attempt under CountAttempt always fails

    for (int n = 1; n <= table.size(); ++n) {
        const AmcMode& m = table.mode(n);
        const size_t i = static_cast<size_t>(n);
        p.sd_ln_a[i] = m.fit_a > 0.0 ? std::log(m.fit_a) : -kInf;
        p.sd_g[i] = m.fit_g;
        p.sd_cutoff[i] = m.cutoff;
        p.rd_ln_a[i] = p.sd_ln_a[i];
        p.rd_g[i] = m.fit_g;
        p.rd_cutoff[i] = m.cutoff;
        p.eps[i] = sr_packet_error(m, snrs.snr_sr);
    }

    if (cfg.kind == SimModeKind::Adaptive) {
        for (int n = 1; n <= table.size(); ++n) {
            p.sd_threshold[static_cast<size_t>(n)] = cfg.design_sd.thresholds[static_cast<size_t>(n - 1)];
            p.rd_threshold[static_cast<size_t>(n)] = cfg.design_rd.thresholds[static_cast<size_t>(n - 1)];
        }
        if (cfg.policy == OutagePolicy::Wait && cfg.nr > 0) {
            const double lowest = cfg.design_rd.thresholds.front();
            if (std::isinf(lowest)) {
                throw std::domain_error("simulate: relay design is entirely in outage under the wait policy");
            }
            p.relay_lo = lowest;
        }
    } else {
        p.fixed_source = static_cast<std::uint8_t>(cfg.fixed_n);
        p.fixed_relay = static_cast<std::uint8_t>(cfg.fixed_m);
    }
    return p;
}

namespace {

// Sorts the relay-attempt nibbles so signatures become canonical multiset
// keys; outcome, source mode and attempt count are untouched.
std::uint64_t canonicalize(std::uint64_t sig) {
    const unsigned l = kn::sig_attempts(sig);
    if (l < 2) return sig;
    std::uint8_t m[kn::kMaxAttempts];
    for (unsigned j = 0; j < l; ++j) {
        m[j] = static_cast<std::uint8_t>((sig >> (kn::kSigRelayShift + 4 * j)) & 0xf);
    }
    std::sort(m, m + l);
    std::uint64_t packed = 0;
    for (unsigned j = 0; j < l; ++j) {
        packed |= static_cast<std::uint64_t>(m[j]) << (4 * j);
    }
    return (sig & ((1ull << kn::kSigRelayShift) - 1)) | (packed << kn::kSigRelayShift);
}

class Tally {
public:
    explicit Tally(int nr) {
        const int sig_bits = kn::kSigRelayShift + 4 * std::max(nr, 1);
        flat_bits_ = sig_bits <= 20 ? sig_bits : 0;
        if (flat_bits_) flat_.assign(1ull << flat_bits_, 0);
    }

    void consume(const std::uint64_t* sigs, size_t count) {
        if (flat_bits_) {
            for (size_t i = 0; i < count; ++i) ++flat_[canonicalize(sigs[i])];
        } else {
            for (size_t i = 0; i < count; ++i) ++sparse_[canonicalize(sigs[i])];
        }
    }

    std::map<std::uint64_t, std::uint64_t> collect() const {
        std::map<std::uint64_t, std::uint64_t> out;
        if (flat_bits_) {
            for (std::uint64_t s = 0; s < flat_.size(); ++s) {
                if (flat_[s]) out.emplace(s, flat_[s]);
            }
        } else {
            out.insert(sparse_.begin(), sparse_.end());
        }
        return out;
    }

private:
    int flat_bits_ = 0;
    std::vector<std::uint64_t> flat_;
    std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

void finalize(SimStats& s) {
    s.counts = EventCounts{};
    s.counts.delivered_relay_at.assign(static_cast<size_t>(s.nr), 0);
    s.transmitted = 0;
    s.delivered = 0;
    s.losses = 0;

    double sum_v = 0.0;
    double sum_v2 = 0.0;
    double sum_delivered_v = 0.0;

    for (const auto& [sig, count] : s.signature_counts) {
        const auto outcome = kn::sig_outcome(sig);
        if (outcome == kn::Outcome::SourceOutage) {
            s.counts.source_outage += count;
            continue;
        }
        s.transmitted += count;

        const unsigned n = kn::sig_source_mode(sig);
        const unsigned l = kn::sig_attempts(sig);
        double inv_sum = s.inv_rates.at(n - 1);
        for (unsigned j = 0; j < l; ++j) {
            const unsigned m = kn::sig_relay_mode(sig, j);
            if (m != 0) inv_sum += s.inv_rates.at(m - 1);
        }
        const double v = 1.0 / inv_sum;
        const double c = static_cast<double>(count);
        sum_v += c * v;
        sum_v2 += c * v * v;

        bool is_delivered = false;
        switch (outcome) {
            case kn::Outcome::DeliveredFirst:
                s.counts.delivered_first += count;
                is_delivered = true;
                break;
            case kn::Outcome::LostRelayDecode:
                s.counts.lost_relay_decode += count;
                break;
            case kn::Outcome::DeliveredRelay:
                s.counts.delivered_relay_at.at(l - 1) += count;
                is_delivered = true;
                break;
            case kn::Outcome::LostBudget:
                s.counts.lost_budget += count;
                break;
            case kn::Outcome::SourceOutage:
                break;
        }
        if (is_delivered) {
            s.delivered += count;
            sum_delivered_v += c * v;
        }
    }
    s.losses = s.counts.lost_relay_decode + s.counts.lost_budget;

    const double m = static_cast<double>(s.packets);
    if (s.packets > 0) {
        s.eta_hat = sum_v / m;
        s.goodput = sum_delivered_v / m;
        const double denom = s.packets > 1 ? m - 1.0 : 1.0;
        const double var = std::max(0.0, (sum_v2 - sum_v * sum_v / m) / denom);
        s.eta_se = std::sqrt(var / m);
    } else {
        s.eta_hat = s.goodput = s.eta_se = 0.0;
    }
    if (s.transmitted > 0) {
        const double tx = static_cast<double>(s.transmitted);
        s.plr_hat = static_cast<double>(s.losses) / tx;
        s.plr_se = std::sqrt(s.plr_hat * (1.0 - s.plr_hat) / tx);
    } else {
        s.plr_hat = s.plr_se = 0.0;
    }
}

}  // namespace

SimStats simulate_range(const ModeTable& table, const Topology& topology,
                        const SimConfig& config, std::uint64_t first_cycle,
                        std::uint64_t count) {
    config.validate(table);
    const kn::CycleParams params = make_cycle_params(table, topology, config);
    const kn::CycleKernelFn kernel = kn::select_cycle_kernel();

    Tally tally(config.nr);
    constexpr size_t kBlock = 8192;
    std::vector<std::uint64_t> buf(kBlock);
    std::uint64_t done = 0;
    while (done < count) {
        const size_t chunk = static_cast<size_t>(std::min<std::uint64_t>(kBlock, count - done));
        kernel(params, first_cycle + done, std::span<std::uint64_t>(buf.data(), chunk));
        tally.consume(buf.data(), chunk);
        done += chunk;
    }

    SimStats s;
    s.packets = count;
    s.seed = config.seed;
    s.nr = config.nr;
    s.policy = config.policy;
    s.kind = config.kind;
    s.fixed_n = config.fixed_n;
    s.fixed_m = config.fixed_m;
    s.packet_bits = table.packet_bits;
    s.inv_rates.reserve(static_cast<size_t>(table.size()));
    for (const AmcMode& m : table.modes) s.inv_rates.push_back(1.0 / m.rate);
    s.signature_counts = tally.collect();
    finalize(s);
    return s;
}

SimStats simulate(const ModeTable& table, const Topology& topology, const SimConfig& config) {
    return simulate_range(table, topology, config, 0, config.packets);
}

SimStats merge_stats(const SimStats& a, const SimStats& b) {
    if (a.nr != b.nr || a.policy != b.policy || a.kind != b.kind || a.fixed_n != b.fixed_n ||
        a.fixed_m != b.fixed_m || a.inv_rates != b.inv_rates || a.packet_bits != b.packet_bits) {
        throw std::invalid_argument("merge_stats: incompatible run shapes");
    }
    SimStats out = a;
    out.packets = a.packets + b.packets;
    for (const auto& [sig, count] : b.signature_counts) {
        out.signature_counts[sig] += count;
    }
    finalize(out);
    return out;
}

}  // namespace coopamc

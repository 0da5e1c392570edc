#include "coopamc/performance.hpp"

#include <cmath>
#include <stdexcept>

namespace coopamc {

namespace {

constexpr int kMaxEnumeratedAttempts = 4;

// One relay attempt outcome class: selection probability, average failure
// probability, reciprocal rate (0 for a consumed outage attempt).
struct RelayBranch {
    double prob;
    double per;
    double inv_rate;
};

// Empty result under ConditionalWait means the conditional distribution is
// undefined (relay always in outage); callers must only raise that as an
// error when the relay phase is actually reachable.
std::vector<RelayBranch> relay_branches(const LinkDesign& rd, RelayModePolicy policy) {
    std::vector<RelayBranch> out;
    const double non_outage = 1.0 - rd.outage_prob();
    switch (policy) {
        case RelayModePolicy::ConditionalWait: {
            if (!(non_outage > 0.0)) return out;
            for (int m = 1; m <= rd.n_modes(); ++m) {
                const double p = rd.prob(m);
                if (p <= 0.0) continue;
                out.push_back({p / non_outage, rd.avg_per(m), 1.0 / rd.rate(m)});
            }
            break;
        }
        case RelayModePolicy::CountAttempt: {
            if (rd.outage_prob() > 0.0) out.push_back({rd.outage_prob(), 1.0, 0.0});
            for (int m = 1; m <= rd.n_modes(); ++m) {
                const double p = rd.prob(m);
                if (p <= 0.0) continue;
                out.push_back({p, rd.avg_per(m), 1.0 / rd.rate(m)});
            }
            break;
        }
        case RelayModePolicy::UnnormalizedLiteral: {
            for (int m = 1; m <= rd.n_modes(); ++m) {
                const double p = rd.prob(m);
                if (p <= 0.0) continue;
                out.push_back({p, rd.avg_per(m), 1.0 / rd.rate(m)});
            }
            break;
        }
    }
    return out;
}

// Expected reciprocal of the total symbol cost, summed over every relay
// attempt sequence reachable from attempt `level`, given the reciprocal-rate
// sum accumulated so far. Sequences that reach the last allowed attempt
// contribute whether that attempt succeeds or not.
double relay_expectation(const std::vector<RelayBranch>& branches, int level, int nr,
                         double inv_rate_sum) {
    double acc = 0.0;
    for (const RelayBranch& b : branches) {
        const double total = inv_rate_sum + b.inv_rate;
        if (level == nr) {
            acc += b.prob / total;
        } else {
            acc += b.prob * ((1.0 - b.per) / total + b.per * relay_expectation(branches, level + 1, nr, total));
        }
    }
    return acc;
}

void check_shared_rates(const LinkDesign& a, const LinkDesign& b) {
    if (a.rates != b.rates) {
        throw std::invalid_argument("link designs must share one mode table");
    }
}

void check_eps(const LinkDesign& d, const std::vector<double>& eps) {
    if (eps.size() != static_cast<size_t>(d.n_modes())) {
        throw std::invalid_argument("eps must have one entry per mode");
    }
}

// Non-outage-normalized link averages used by the loss expressions.
struct LinkAverages {
    double per;      // sum PER_n P_n / sum P_n
    double eps_per;  // sum eps_n PER_n P_n / sum P_n
};

LinkAverages link_averages(const LinkDesign& d, const std::vector<double>* eps) {
    double num = 0.0;
    double num_eps = 0.0;
    double den = 0.0;
    for (int n = 1; n <= d.n_modes(); ++n) {
        const double p = d.prob(n);
        num += d.avg_per(n) * p;
        if (eps) num_eps += (*eps)[static_cast<size_t>(n - 1)] * d.avg_per(n) * p;
        den += p;
    }
    if (!(den > 0.0)) throw std::domain_error("design is entirely in outage");
    return {num / den, num_eps / den};
}

}  // namespace

double CycleEventProbs::total() const {
    double t = delivered_first + lost_relay_decode + budget_exhausted;
    for (double v : delivered_relay_at) t += v;
    return t;
}

double eta_cooperative(const LinkDesign& design_sd, const LinkDesign& design_rd,
                       const std::vector<double>& eps, int nr, RelayModePolicy policy) {
    check_shared_rates(design_sd, design_rd);
    check_eps(design_sd, eps);
    if (nr < 0 || nr > kMaxEnumeratedAttempts) {
        throw std::invalid_argument("eta_cooperative: nr must be in [0, 4]");
    }

    std::vector<RelayBranch> branches;
    if (nr > 0) branches = relay_branches(design_rd, policy);

    double eta = 0.0;
    for (int n = 1; n <= design_sd.n_modes(); ++n) {
        const double p_n = design_sd.prob(n);
        if (p_n <= 0.0) continue;
        const double rate = design_sd.rate(n);
        if (nr == 0) {
            eta += p_n * rate;
            continue;
        }
        const double reach_relay = (1.0 - eps[static_cast<size_t>(n - 1)]) * design_sd.avg_per(n);
        if (reach_relay > 0.0 && branches.empty() && policy == RelayModePolicy::ConditionalWait) {
            throw std::domain_error("relay design is entirely in outage but reachable");
        }
        const double relay_part =
            branches.empty() ? 0.0 : relay_expectation(branches, 1, nr, 1.0 / rate);
        eta += p_n * ((1.0 - reach_relay) * rate + reach_relay * relay_part);
    }
    return eta;
}

double plr_cooperative(const LinkDesign& design_sd, const LinkDesign& design_rd,
                       const std::vector<double>& eps, PlrVariant variant) {
    check_shared_rates(design_sd, design_rd);
    check_eps(design_sd, eps);
    const LinkAverages sd = link_averages(design_sd, &eps);
    const LinkAverages rd = link_averages(design_rd, nullptr);
    const double first = variant == PlrVariant::FullAverage ? sd.per : sd.per - sd.eps_per;
    return first * rd.per + sd.eps_per * (1.0 - rd.per);
}

double plr_truncated(const LinkDesign& design_sd, const LinkDesign& design_rd,
                     const std::vector<double>& eps, int nr, RelayModePolicy policy) {
    check_shared_rates(design_sd, design_rd);
    check_eps(design_sd, eps);
    if (nr < 0) throw std::invalid_argument("plr_truncated: nr must be >= 0");

    double attempt_fail = 1.0;  // nr = 0: the packet is lost outright
    bool relay_usable = false;
    if (nr > 0) {
        const std::vector<RelayBranch> branches = relay_branches(design_rd, policy);
        relay_usable = !branches.empty();
        double b = 0.0;
        for (const RelayBranch& br : branches) b += br.prob * br.per;
        if (relay_usable) attempt_fail = std::pow(b, nr);
    }

    double num = 0.0;
    double den = 0.0;
    for (int n = 1; n <= design_sd.n_modes(); ++n) {
        const double p_n = design_sd.prob(n);
        const double e = eps[static_cast<size_t>(n - 1)];
        if (nr > 0 && !relay_usable && policy == RelayModePolicy::ConditionalWait &&
            p_n * design_sd.avg_per(n) * (1.0 - e) > 0.0) {
            throw std::domain_error("relay design is entirely in outage but reachable");
        }
        num += p_n * design_sd.avg_per(n) * (e + (1.0 - e) * attempt_fail);
        den += p_n;
    }
    if (!(den > 0.0)) throw std::domain_error("design is entirely in outage");
    return num / den;
}

double eta_traditional(const LinkDesign& design, int nr) {
    const std::vector<double> no_relay_loss(static_cast<size_t>(design.n_modes()), 0.0);
    return eta_cooperative(design, design, no_relay_loss, nr);
}

double eta_amc_only(const LinkDesign& design_sd) {
    double eta = 0.0;
    for (int n = 1; n <= design_sd.n_modes(); ++n) {
        eta += design_sd.rate(n) * design_sd.prob(n);
    }
    return eta;
}

double eta_fixed(int n, int m, double mean_sd, double mean_rd, double snr_sr,
                 const ModeTable& table) {
    (void)mean_rd;  // the relay's fading enters the loss rate, not the bit count
    const AmcMode& source = table.mode(n);
    const AmcMode& relay = table.mode(m);
    const double eps_n = sr_packet_error(source, snr_sr);
    const double per_sd = full_avg_per(source, mean_sd);
    const double share = source.rate / (source.rate + relay.rate);
    return source.rate * (1.0 - (1.0 - eps_n) * share * per_sd);
}

double plr_fixed(int n, int m, double mean_sd, double mean_rd, double snr_sr,
                 const ModeTable& table) {
    const AmcMode& source = table.mode(n);
    const AmcMode& relay = table.mode(m);
    const double eps_n = sr_packet_error(source, snr_sr);
    const double per_sd = full_avg_per(source, mean_sd);
    const double per_rd = full_avg_per(relay, mean_rd);
    return per_sd * per_rd + eps_n * per_sd * (1.0 - per_rd);
}

CycleEventProbs cycle_event_probs(const LinkDesign& design_sd, const LinkDesign& design_rd,
                                  const std::vector<double>& eps, int nr,
                                  RelayModePolicy policy) {
    check_shared_rates(design_sd, design_rd);
    check_eps(design_sd, eps);
    if (nr < 0) throw std::invalid_argument("cycle_event_probs: nr must be >= 0");

    double den = 0.0;
    double delivered = 0.0;
    double lost_decode = 0.0;
    double reach_relay = 0.0;
    for (int n = 1; n <= design_sd.n_modes(); ++n) {
        const double p_n = design_sd.prob(n);
        const double e = eps[static_cast<size_t>(n - 1)];
        den += p_n;
        delivered += p_n * (1.0 - design_sd.avg_per(n));
        lost_decode += p_n * design_sd.avg_per(n) * e;
        reach_relay += p_n * design_sd.avg_per(n) * (1.0 - e);
    }
    if (!(den > 0.0)) throw std::domain_error("design is entirely in outage");

    CycleEventProbs out;
    out.delivered_first = delivered / den;
    out.lost_relay_decode = lost_decode / den;
    const double reach = reach_relay / den;
    if (nr == 0) {
        out.budget_exhausted = reach;
        return out;
    }

    const std::vector<RelayBranch> branches = relay_branches(design_rd, policy);
    if (branches.empty() && policy == RelayModePolicy::ConditionalWait && reach > 0.0) {
        throw std::domain_error("relay design is entirely in outage but reachable");
    }
    double fail = 0.0;
    double succeed = 0.0;
    for (const RelayBranch& b : branches) {
        fail += b.prob * b.per;
        succeed += b.prob * (1.0 - b.per);
    }
    out.delivered_relay_at.resize(static_cast<size_t>(nr), 0.0);
    double entering = reach;
    for (int l = 1; l <= nr; ++l) {
        out.delivered_relay_at[static_cast<size_t>(l - 1)] = entering * succeed;
        entering *= fail;
    }
    out.budget_exhausted = entering;
    return out;
}

}  // namespace coopamc

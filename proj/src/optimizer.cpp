#include "coopamc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coopamc {

namespace {

std::vector<double> candidate_targets(double p_loss, const GridSpec& grid, int nr) {
    if (grid.points < 2) throw std::invalid_argument("optimize_adaptive: grid needs >= 2 points");
    std::vector<double> targets;
    targets.reserve(static_cast<size_t>(grid.points) + 1);
    const double ln_lo = std::log(p_loss);
    for (int i = 0; i < grid.points; ++i) {
        // Strictly inside (p_loss, 1).
        const double frac = static_cast<double>(i + 1) / static_cast<double>(grid.points + 1);
        targets.push_back(std::exp(ln_lo * (1.0 - frac)));
    }
    const double equal_split = std::pow(p_loss, 1.0 / static_cast<double>(nr + 1));
    if (equal_split > p_loss && equal_split < 1.0) targets.push_back(equal_split);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    return targets;
}

}  // namespace

AdaptiveSearchResult optimize_adaptive(const ModeTable& table, const Topology& topology,
                                       double p_loss, const GridSpec& grid, int nr) {
    table.validate();
    if (!(p_loss > 0.0 && p_loss < 1.0)) {
        throw std::invalid_argument("optimize_adaptive: p_loss must be in (0, 1)");
    }
    if (nr < 1 || nr > 4) throw std::invalid_argument("optimize_adaptive: nr must be in [1, 4]");

    const LinkSnrs snrs = derive_topology(topology);
    const std::vector<double> eps = sr_eps_vector(table, snrs.snr_sr);

    AdaptiveSearchResult result;
    double best_eta = -1.0;
    for (const double p_t_sd : candidate_targets(p_loss, grid, nr)) {
        CandidateTrace entry;
        entry.p_t_sd = p_t_sd;

        const LinkDesign design_sd = design_link(table, snrs.mean_sd, p_t_sd);
        const double eps_bar = avg_sr_eps(design_sd, eps);

        // Split of the loss budget between the two hops, single-attempt form.
        const double p_t_rd = (p_loss - eps_bar * p_t_sd) / (p_t_sd * (1.0 - eps_bar));
        entry.p_t_rd = p_t_rd;
        if (!(p_t_rd > 0.0)) {
            entry.status = CandidateStatus::SkippedRdNonpositive;
            result.trace.push_back(entry);
            continue;
        }
        if (!(p_t_rd < 1.0)) {
            entry.status = CandidateStatus::SkippedRdTooLarge;
            result.trace.push_back(entry);
            continue;
        }

        const LinkDesign design_rd = design_link(table, snrs.mean_rd, p_t_rd);
        entry.plr = plr_cooperative(design_sd, design_rd, eps);
        entry.eta = eta_cooperative(design_sd, design_rd, eps, nr);
        entry.feasible = entry.plr <= p_loss;
        entry.status = entry.feasible ? CandidateStatus::Feasible : CandidateStatus::PlrInfeasible;
        result.trace.push_back(entry);

        if (entry.feasible && entry.eta > best_eta) {
            best_eta = entry.eta;
            OptimizedSystem sys;
            sys.p_t_sd_star = p_t_sd;
            sys.p_t_rd_star = p_t_rd;
            sys.design_sd = design_sd;
            sys.design_rd = design_rd;
            sys.report = {entry.eta, entry.plr, true, nr, eps_bar};
            result.best = std::move(sys);
        }
    }
    if (result.best) result.best->search_trace = result.trace;
    return result;
}

FixedChoice optimize_fixed(const ModeTable& table, const Topology& topology, double p_loss) {
    table.validate();
    if (!(p_loss > 0.0 && p_loss < 1.0)) {
        throw std::invalid_argument("optimize_fixed: p_loss must be in (0, 1)");
    }
    const LinkSnrs snrs = derive_topology(topology);

    FixedChoice best;
    for (int n = 1; n <= table.size(); ++n) {
        for (int m = 1; m <= table.size(); ++m) {
            const double plr = plr_fixed(n, m, snrs.mean_sd, snrs.mean_rd, snrs.snr_sr, table);
            if (plr > p_loss) continue;
            const double eta = eta_fixed(n, m, snrs.mean_sd, snrs.mean_rd, snrs.snr_sr, table);
            if (!best.feasible || eta > best.eta) {
                best = {n, m, eta, plr, true};
            }
        }
    }
    return best;
}

double power_threshold(const ModeTable& table, int n, int m, double d, double alpha,
                       double p_loss, double bracket_lo_db, double bracket_hi_db,
                       double tol_db) {
    table.validate();
    if (!(bracket_lo_db < bracket_hi_db)) {
        throw std::invalid_argument("power_threshold: bracket must satisfy lo < hi");
    }
    const auto plr_at = [&](double pbar_db) {
        const LinkSnrs snrs = derive_topology({db_to_linear(pbar_db), d, alpha});
        return plr_fixed(n, m, snrs.mean_sd, snrs.mean_rd, snrs.snr_sr, table);
    };

    double lo = bracket_lo_db;
    double hi = bracket_hi_db;
    if (plr_at(lo) <= p_loss) return db_to_linear(lo);  // feasible on the whole bracket
    if (plr_at(hi) > p_loss) {
        throw std::invalid_argument("power_threshold: bracket does not straddle the constraint");
    }
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        if (plr_at(mid) <= p_loss) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return db_to_linear(hi);  // feasible side of the bracket
}

BaselineResult baseline_equal_target(const ModeTable& table, const Topology& topology,
                                     double p_loss, int nr) {
    table.validate();
    if (!(p_loss > 0.0 && p_loss < 1.0)) {
        throw std::invalid_argument("baseline_equal_target: p_loss must be in (0, 1)");
    }
    if (nr < 0) throw std::invalid_argument("baseline_equal_target: nr must be >= 0");

    const LinkSnrs snrs = derive_topology(topology);
    BaselineResult out;
    out.p_t = std::pow(p_loss, 1.0 / static_cast<double>(nr + 1));
    out.design = design_link(table, snrs.mean_sd, out.p_t);
    const std::vector<double> zero_eps(static_cast<size_t>(table.size()), 0.0);
    const double plr = plr_truncated(out.design, out.design, zero_eps, nr);
    out.report = {eta_traditional(out.design, nr), plr, plr <= p_loss, nr, 0.0};
    return out;
}

}  // namespace coopamc

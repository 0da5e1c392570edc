// coopamc - design and evaluate joint AMC / cooperative ARQ link adaptation.
//
// Subcommands:
//   design    build switching thresholds for one link and write the design
//   evaluate  run the target-PER split search at one operating point
//   simulate  Monte Carlo protocol run for a design pair or a fixed pair
//   sweep     batch evaluation across a transmit-SNR range (CSV or JSON)
//   fixed     fixed-rate benchmark: pair selection and power threshold
//
// Exit codes: 0 success, 1 usage or validation error, 2 a requested scheme
// was infeasible at every sweep point.

#include <cstdio>
#include <stdexcept>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopamc/experiments.hpp"
#include "coopamc/io.hpp"

namespace {

using coopamc::io::json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
    } else {
        coopamc::io::write_text_file(out_path, text);
    }
}

coopamc::OutagePolicy parse_policy(const std::string& name) {
    if (name == "wait") return coopamc::OutagePolicy::Wait;
    if (name == "count-attempt") return coopamc::OutagePolicy::CountAttempt;
    throw std::invalid_argument("--policy must be 'wait' or 'count-attempt'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint AMC / cooperative ARQ link adaptation toolkit"};
    app.require_subcommand(1);

    std::string table_path;
    std::string out_path;
    std::string format = "csv";
    double pbar_db = 10.0;
    double d = 0.2;
    double alpha = 4.0;
    double p_loss = 1e-3;
    int nr = 1;
    int grid_points = 200;
    std::uint64_t packets = 1000000;
    std::uint64_t seed = 1;
    std::string policy = "wait";

    // design
    auto* cmd_design = app.add_subcommand("design", "design switching thresholds for one link");
    double target_per = 0.01;
    cmd_design->add_option("--table", table_path, "mode table JSON")->required();
    cmd_design->add_option("--pbar-db", pbar_db, "mean link SNR in dB")->required();
    cmd_design->add_option("--pt", target_per, "per-mode target PER, in (0,1)")->required();
    cmd_design->add_option("--out", out_path, "output file (default: stdout)");

    // evaluate
    auto* cmd_eval = app.add_subcommand("evaluate", "target-PER split search at one point");
    bool with_trace = false;
    cmd_eval->add_option("--table", table_path)->required();
    cmd_eval->add_option("--pbar-db", pbar_db)->required();
    cmd_eval->add_option("--d", d, "relay position in [0,1)");
    cmd_eval->add_option("--alpha", alpha, "path-loss exponent");
    cmd_eval->add_option("--ploss", p_loss, "loss-rate constraint");
    cmd_eval->add_option("--nr", nr, "relay attempt budget");
    cmd_eval->add_option("--grid", grid_points, "search grid size");
    cmd_eval->add_flag("--trace", with_trace, "include the full search trace");
    cmd_eval->add_option("--out", out_path);

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo protocol simulation");
    std::string design_sd_path, design_rd_path;
    std::vector<int> fixed_pair;
    cmd_sim->add_option("--table", table_path, "mode table JSON (required with --fixed)");
    cmd_sim->add_option("--design-sd", design_sd_path, "serialized source-link design");
    cmd_sim->add_option("--design-rd", design_rd_path, "serialized relay-link design");
    cmd_sim->add_option("--fixed", fixed_pair, "fixed source/relay mode pair")->expected(2);
    cmd_sim->add_option("--pbar-db", pbar_db)->required();
    cmd_sim->add_option("--d", d);
    cmd_sim->add_option("--alpha", alpha);
    cmd_sim->add_option("--nr", nr);
    cmd_sim->add_option("--packets", packets, "packet cycles to simulate");
    cmd_sim->add_option("--seed", seed);
    cmd_sim->add_option("--policy", policy, "relay outage policy: wait | count-attempt");
    cmd_sim->add_option("--out", out_path);

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "evaluate schemes across a SNR range");
    coopamc::SweepSpec spec;
    std::string schemes_csv = "joint-adaptive,amc-only";
    std::uint64_t sim_check = 0;
    cmd_sweep->add_option("--table", table_path)->required();
    cmd_sweep->add_option("--start-db", spec.start_db, "sweep start (dB)");
    cmd_sweep->add_option("--stop-db", spec.stop_db, "sweep stop (dB)");
    cmd_sweep->add_option("--step-db", spec.step_db, "sweep step (dB)");
    cmd_sweep->add_option("--d", spec.d);
    cmd_sweep->add_option("--alpha", spec.alpha);
    cmd_sweep->add_option("--ploss", spec.p_loss);
    cmd_sweep->add_option("--nr", spec.nr);
    cmd_sweep->add_option("--grid", spec.grid_points);
    cmd_sweep->add_option("--schemes", schemes_csv, "comma-separated scheme list");
    cmd_sweep->add_option("--sim-check", sim_check, "Monte Carlo packets per row (0 = off)");
    cmd_sweep->add_option("--seed", spec.seed);
    cmd_sweep->add_option("--policy", policy);
    cmd_sweep->add_option("--format", format, "csv | json");
    cmd_sweep->add_option("--out", out_path);

    // fixed
    auto* cmd_fixed = app.add_subcommand("fixed", "fixed-rate benchmark");
    std::vector<int> pair;
    std::vector<double> bracket_db;
    cmd_fixed->add_option("--table", table_path)->required();
    cmd_fixed->add_option("--pbar-db", pbar_db);
    cmd_fixed->add_option("--d", d);
    cmd_fixed->add_option("--alpha", alpha);
    cmd_fixed->add_option("--ploss", p_loss);
    cmd_fixed->add_option("--pair", pair, "evaluate this (n, m) pair instead of searching")
        ->expected(2);
    cmd_fixed
        ->add_option("--threshold-bracket", bracket_db,
                     "bisect the feasibility power threshold over [lo, hi] dB")
        ->expected(2);
    cmd_fixed->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage/validation
    }

    try {
        if (*cmd_design) {
            const coopamc::ModeTable table = coopamc::io::load_mode_table(table_path);
            const coopamc::LinkDesign design =
                coopamc::design_link(table, coopamc::db_to_linear(pbar_db), target_per);
            emit(coopamc::io::design_to_json(table, design).dump(2), out_path);
            return 0;
        }

        if (*cmd_eval) {
            const coopamc::ModeTable table = coopamc::io::load_mode_table(table_path);
            const coopamc::Topology topo{coopamc::db_to_linear(pbar_db), d, alpha};
            const coopamc::AdaptiveSearchResult r =
                coopamc::optimize_adaptive(table, topo, p_loss, {grid_points}, nr);
            json j;
            j["kind"] = "evaluation";
            j["pbar_db"] = pbar_db;
            j["d"] = d;
            j["alpha"] = alpha;
            j["p_loss"] = p_loss;
            j["nr"] = nr;
            j["feasible"] = r.feasible();
            if (r.feasible()) {
                j["p_t_sd_star"] = r.best->p_t_sd_star;
                j["p_t_rd_star"] = r.best->p_t_rd_star;
                j["eta"] = r.best->report.eta;
                j["plr"] = r.best->report.plr;
                j["eps_bar"] = r.best->report.eps_bar;
                j["design_sd"] = coopamc::io::design_to_json(table, r.best->design_sd);
                j["design_rd"] = coopamc::io::design_to_json(table, r.best->design_rd);
            }
            if (with_trace) {
                json t = json::array();
                for (const coopamc::CandidateTrace& c : r.trace) {
                    t.push_back({{"p_t_sd", c.p_t_sd},
                                 {"p_t_rd", c.p_t_rd},
                                 {"eta", c.eta},
                                 {"plr", c.plr},
                                 {"feasible", c.feasible}});
                }
                j["trace"] = std::move(t);
            }
            emit(j.dump(2), out_path);
            return r.feasible() ? 0 : 2;
        }

        if (*cmd_sim) {
            coopamc::SimConfig cfg;
            cfg.packets = packets;
            cfg.seed = seed;
            cfg.nr = nr;
            cfg.policy = parse_policy(policy);

            coopamc::ModeTable table;
            if (!fixed_pair.empty()) {
                if (table_path.empty()) {
                    throw std::invalid_argument("--table is required with --fixed");
                }
                table = coopamc::io::load_mode_table(table_path);
                cfg.kind = coopamc::SimModeKind::Fixed;
                cfg.fixed_n = fixed_pair[0];
                cfg.fixed_m = fixed_pair[1];
            } else {
                if (design_sd_path.empty() || design_rd_path.empty()) {
                    throw std::invalid_argument(
                        "simulate: need --design-sd and --design-rd, or --fixed n m");
                }
                coopamc::io::LoadedDesign sd = coopamc::io::load_design(design_sd_path);
                coopamc::io::LoadedDesign rd = coopamc::io::load_design(design_rd_path);
                if (coopamc::io::mode_table_to_json(sd.table) !=
                    coopamc::io::mode_table_to_json(rd.table)) {
                    throw std::invalid_argument(
                        "simulate: the two design files use different mode tables");
                }
                table = sd.table;
                cfg.kind = coopamc::SimModeKind::Adaptive;
                cfg.design_sd = std::move(sd.design);
                cfg.design_rd = std::move(rd.design);
            }
            const coopamc::Topology topo{coopamc::db_to_linear(pbar_db), d, alpha};
            const coopamc::SimStats stats = coopamc::simulate(table, topo, cfg);
            emit(coopamc::io::stats_to_json(stats).dump(2), out_path);
            return 0;
        }

        if (*cmd_sweep) {
            const coopamc::ModeTable table = coopamc::io::load_mode_table(table_path);
            spec.schemes.clear();
            std::string item;
            for (char c : schemes_csv + ",") {
                if (c == ',') {
                    if (!item.empty()) spec.schemes.push_back(item);
                    item.clear();
                } else {
                    item += c;
                }
            }
            spec.sim_packets = sim_check;
            spec.policy = parse_policy(policy);
            const std::vector<coopamc::SweepRow> rows = coopamc::run_sweep(table, spec);
            if (format == "csv") {
                emit(coopamc::sweep_to_csv(rows), out_path);
            } else if (format == "json") {
                emit(coopamc::sweep_to_json(table, spec, rows).dump(2), out_path);
            } else {
                throw std::invalid_argument("--format must be 'csv' or 'json'");
            }
            return coopamc::any_scheme_infeasible_everywhere(spec, rows) ? 2 : 0;
        }

        if (*cmd_fixed) {
            const coopamc::ModeTable table = coopamc::io::load_mode_table(table_path);
            json j;
            j["kind"] = "fixed_benchmark";
            j["pbar_db"] = pbar_db;
            j["d"] = d;
            j["alpha"] = alpha;
            j["p_loss"] = p_loss;
            const coopamc::Topology topo{coopamc::db_to_linear(pbar_db), d, alpha};
            const coopamc::LinkSnrs snrs = coopamc::derive_topology(topo);
            bool feasible = true;
            if (!pair.empty()) {
                const int n = pair[0];
                const int m = pair[1];
                j["n"] = n;
                j["m"] = m;
                j["eta"] = coopamc::eta_fixed(n, m, snrs.mean_sd, snrs.mean_rd, snrs.snr_sr, table);
                const double plr =
                    coopamc::plr_fixed(n, m, snrs.mean_sd, snrs.mean_rd, snrs.snr_sr, table);
                j["plr"] = plr;
                feasible = plr <= p_loss;
                j["feasible"] = feasible;
                if (!bracket_db.empty()) {
                    const double pth = coopamc::power_threshold(table, n, m, d, alpha, p_loss,
                                                                bracket_db[0], bracket_db[1]);
                    j["power_threshold"] = pth;
                    j["power_threshold_db"] = coopamc::linear_to_db(pth);
                }
            } else {
                const coopamc::FixedChoice c = coopamc::optimize_fixed(table, topo, p_loss);
                feasible = c.feasible;
                j["feasible"] = c.feasible;
                if (c.feasible) {
                    j["n_star"] = c.n_star;
                    j["m_star"] = c.m_star;
                    j["eta"] = c.eta;
                    j["plr"] = c.plr;
                }
            }
            emit(j.dump(2), out_path);
            return feasible ? 0 : 2;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

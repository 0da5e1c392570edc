#include "coopamc/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coopamc::io {

namespace {

constexpr double kCutoffSnapDb = 0.02;  // tolerance for dB-rounded published cutoffs

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw std::invalid_argument(context + ": " + message);
}

double require_number(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key)) fail(context, "missing field '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) fail(context, "field '" + key + "' must be a number");
    return v.get<double>();
}

// Thresholds may be infinite for degenerate designs; JSON numbers cannot
// carry inf, so those serialize as the string "inf".
json finite_or_inf(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

double parse_finite_or_inf(const json& v, const std::string& context) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    fail(context, "expected a number or \"inf\"");
}

const char* policy_name(OutagePolicy p) {
    return p == OutagePolicy::Wait ? "wait" : "count-attempt";
}

}  // namespace

ModeTable mode_table_from_json(const json& j) {
    ModeTable table;
    if (!j.contains("modes") || !j.at("modes").is_array() || j.at("modes").empty()) {
        fail("mode table", "missing or empty 'modes' array");
    }
    if (j.contains("packet_bits")) {
        table.packet_bits = j.at("packet_bits").get<int>();
    }
    int pos = 1;
    for (const auto& mj : j.at("modes")) {
        const std::string ctx = "mode[" + std::to_string(pos) + "]";
        AmcMode m;
        m.index = static_cast<int>(require_number(mj, "index", ctx));
        m.rate = require_number(mj, "rate_bits_per_symbol", ctx);
        m.fit_a = require_number(mj, "a", ctx);
        m.fit_g = require_number(mj, "g", ctx);
        m.cutoff = db_to_linear(require_number(mj, "cutoff_db", ctx));
        if (mj.contains("name")) m.name = mj.at("name").get<std::string>();

        // Published fit tables round the cutoff in dB; when that rounding
        // puts the fitted PER just above 1, restore the exact ln(a)/g point.
        if (m.fit_a > 1.0 && m.fit_g > 0.0) {
            const double exact = std::log(m.fit_a) / m.fit_g;
            if (m.cutoff < exact && linear_to_db(exact) - linear_to_db(m.cutoff) <= kCutoffSnapDb) {
                m.cutoff = exact;
            }
        }
        table.modes.push_back(std::move(m));
        ++pos;
    }
    try {
        table.validate();
    } catch (const std::exception& e) {
        fail("mode table", e.what());
    }
    return table;
}

json mode_table_to_json(const ModeTable& table) {
    json j;
    j["packet_bits"] = table.packet_bits;
    j["modes"] = json::array();
    for (const AmcMode& m : table.modes) {
        json mj;
        mj["index"] = m.index;
        if (!m.name.empty()) mj["name"] = m.name;
        mj["rate_bits_per_symbol"] = m.rate;
        mj["a"] = m.fit_a;
        mj["g"] = m.fit_g;
        mj["cutoff_db"] = linear_to_db(m.cutoff);
        j["modes"].push_back(std::move(mj));
    }
    return j;
}

ModeTable load_mode_table(const std::string& path) {
    return mode_table_from_json(load_json_file(path));
}

json design_to_json(const ModeTable& table, const LinkDesign& design) {
    json j;
    j["kind"] = "link_design";
    j["target_per"] = design.target_per;
    j["mean_snr"] = design.mean_snr;
    j["mean_snr_db"] = linear_to_db(design.mean_snr);
    j["table"] = mode_table_to_json(table);
    j["thresholds"] = json::array();
    j["thresholds_db"] = json::array();
    j["active"] = json::array();
    j["mode_avg_per"] = json::array();
    for (int n = 1; n <= design.n_modes(); ++n) {
        const double t = design.thresholds[static_cast<size_t>(n - 1)];
        j["thresholds"].push_back(finite_or_inf(t));
        j["thresholds_db"].push_back(t > 0.0 ? finite_or_inf(linear_to_db(t)) : json("-inf"));
        j["active"].push_back(static_cast<bool>(design.active[static_cast<size_t>(n - 1)]));
        j["mode_avg_per"].push_back(design.avg_per(n));
    }
    j["mode_prob"] = design.mode_prob;
    return j;
}

LoadedDesign design_from_json(const json& j) {
    if (!j.contains("kind") || j.at("kind") != "link_design") {
        fail("design", "not a link_design document");
    }
    LoadedDesign out;
    out.table = mode_table_from_json(j.at("table"));
    const double mean_snr = require_number(j, "mean_snr", "design");
    const double target = require_number(j, "target_per", "design");

    std::vector<double> thresholds;
    for (const auto& v : j.at("thresholds")) {
        thresholds.push_back(parse_finite_or_inf(v, "design.thresholds"));
    }
    out.design = rebuild_from_thresholds(out.table, mean_snr, target, thresholds);

    // Audit: the stored statistics must match what the thresholds imply.
    const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    const auto& probs = j.at("mode_prob");
    if (probs.size() != out.design.mode_prob.size()) fail("design", "mode_prob size mismatch");
    for (size_t i = 0; i < out.design.mode_prob.size(); ++i) {
        if (!close(probs.at(i).get<double>(), out.design.mode_prob[i])) {
            fail("design", "stored mode_prob[" + std::to_string(i) +
                               "] disagrees with thresholds");
        }
    }
    const auto& pers = j.at("mode_avg_per");
    if (pers.size() != out.design.mode_avg_per.size()) fail("design", "mode_avg_per size mismatch");
    for (size_t i = 0; i < out.design.mode_avg_per.size(); ++i) {
        if (!close(pers.at(i).get<double>(), out.design.mode_avg_per[i])) {
            fail("design", "stored mode_avg_per[" + std::to_string(i) +
                               "] disagrees with thresholds");
        }
    }
    return out;
}

LoadedDesign load_design(const std::string& path) {
    return design_from_json(load_json_file(path));
}

json stats_to_json(const SimStats& s) {
    json j;
    j["kind"] = "sim_stats";
    json cfg;
    cfg["packets"] = s.packets;
    cfg["seed"] = s.seed;
    cfg["nr"] = s.nr;
    cfg["policy"] = policy_name(s.policy);
    cfg["mode"] = s.kind == SimModeKind::Adaptive ? "adaptive" : "fixed";
    if (s.kind == SimModeKind::Fixed) {
        cfg["fixed_n"] = s.fixed_n;
        cfg["fixed_m"] = s.fixed_m;
    }
    cfg["packet_bits"] = s.packet_bits;
    cfg["inv_rates"] = s.inv_rates;
    j["config"] = std::move(cfg);

    json est;
    est["eta_hat"] = s.eta_hat;
    est["eta_se"] = s.eta_se;
    est["plr_hat"] = s.plr_hat;
    est["plr_se"] = s.plr_se;
    est["goodput"] = s.goodput;
    j["estimates"] = std::move(est);

    json counts;
    counts["transmitted"] = s.transmitted;
    counts["delivered"] = s.delivered;
    counts["losses"] = s.losses;
    counts["source_outage"] = s.counts.source_outage;
    counts["delivered_first"] = s.counts.delivered_first;
    counts["lost_relay_decode"] = s.counts.lost_relay_decode;
    counts["delivered_relay_at"] = s.counts.delivered_relay_at;
    counts["lost_budget"] = s.counts.lost_budget;
    j["counts"] = std::move(counts);

    json sigs = json::array();
    for (const auto& [sig, count] : s.signature_counts) {
        sigs.push_back(json::array({sig, count}));
    }
    j["signatures"] = std::move(sigs);
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

json load_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    try {
        return json::parse(f);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace coopamc::io

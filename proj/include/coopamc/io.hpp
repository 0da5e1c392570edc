#pragma once
// File formats: mode-table configs, serialized link designs, simulation
// statistics. JSON throughout, with field-level diagnostics on bad input.

#include <string>

#include <json.hpp>

#include "coopamc/channel_model.hpp"
#include "coopamc/link_design.hpp"
#include "coopamc/sim.hpp"

namespace coopamc::io {

using json = nlohmann::ordered_json;

// Mode tables. Cutoffs live in dB in the files; the loader converts to
// linear and snaps a cutoff up to ln(a)/g when dB rounding of a published
// fit left the PER marginally above 1 at the cutoff.
ModeTable mode_table_from_json(const json& j);
json mode_table_to_json(const ModeTable& table);
ModeTable load_mode_table(const std::string& path);

// Link designs, embedded table included so a design file alone suffices to
// recompute every derived quantity. Loading rebuilds the statistics from the
// thresholds and verifies them against the stored values.
json design_to_json(const ModeTable& table, const LinkDesign& design);
struct LoadedDesign {
    ModeTable table;
    LinkDesign design;
};
LoadedDesign design_from_json(const json& j);
LoadedDesign load_design(const std::string& path);

// Simulation statistics with full tallies for audit and exact merging.
json stats_to_json(const SimStats& stats);

void write_text_file(const std::string& path, const std::string& text);
json load_json_file(const std::string& path);

}  // namespace coopamc::io

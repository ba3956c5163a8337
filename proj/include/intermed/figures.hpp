#pragma once

// Data series behind the threshold-band and metric-curve figures. The parameter sets are
// reconstructions (the figures name the varied parameter but not its values) and are
// recorded in each figure's metadata.

#include "intermed/sweep.hpp"

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace intermed {

struct FigureData {
    std::string id;
    std::string title;
    Table table;
    nlohmann::json metadata;
};

/// 2a 2b 4a 4b 5a 5b 6a 6b 7a 7b 8a 8b
const std::vector<std::string>& figure_ids();

/// Throws ConfigError for an unknown id.
FigureData make_figure(const std::string& id);

/// Writes figure_<id>.csv and figure_<id>.json into `dir` (created if missing).
void write_figure(const FigureData& fig, const std::filesystem::path& dir);

}  // namespace intermed

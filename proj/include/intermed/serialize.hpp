#pragma once

// JSON forms of the engine's records. Absent thresholds and infinite costs are written as null.

#include "intermed/equilibrium.hpp"
#include "intermed/extensions.hpp"
#include "intermed/metrics.hpp"
#include "intermed/oracle.hpp"
#include "intermed/sweep.hpp"

#include <json.hpp>

namespace intermed {

inline constexpr const char* kEngineVersion = "0.1.0";

nlohmann::json to_json(const Thresholds& t);
Thresholds thresholds_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CostModel& m);
CostModel cost_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MarketParams& p);
MarketParams market_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepSpec& s);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WelfareReport& r);
nlohmann::json to_json(const MonopolistSolution& s);
nlohmann::json to_json(const ComparisonReport& r);

/// Solver tolerances recorded alongside every generated artifact.
nlohmann::json tolerance_metadata();

}  // namespace intermed

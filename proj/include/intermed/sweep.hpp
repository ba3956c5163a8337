#pragma once

/**
 * @file sweep.hpp
 * @brief One-parameter sweeps over the equilibrium and the CSV layout they are written in.
 *
 * Column order is fixed: the swept variable, the regime, then the requested
 * outputs in canonical order (quality, intermediary_utility, consumer_utility,
 * social_welfare, planner_with, planner_without, margin, usage). Numbers use
 * the shortest representation that round-trips; absent values print as `null`.
 */

#include "intermed/core.hpp"
#include "intermed/equilibrium.hpp"

#include <optional>
#include <string>
#include <vector>

namespace intermed {

enum class SweepVariable { Nu, Alpha, Consumers, Gamma, SupplyCost };
enum class Spacing { Linear, Log };
enum class SweepMode { Baseline, Monopolist, Marginal, LinearFee };
enum class Output {
    Quality,
    IntermediaryUtility,
    ConsumerUtility,
    SocialWelfare,
    PlannerWith,
    PlannerWithout,
    Margin,
    Usage,
};

std::string_view to_string(SweepVariable v);
std::string_view to_string(Spacing s);
std::string_view to_string(SweepMode m);
std::string_view to_string(Output o);
std::optional<SweepVariable> parse_sweep_variable(std::string_view name);
std::optional<Spacing> parse_spacing(std::string_view name);
std::optional<SweepMode> parse_sweep_mode(std::string_view name);
std::optional<Output> parse_output(std::string_view name);

struct SweepSpec {
    CostModel model;
    MarketParams params;
    double gamma = 0.0;  ///< marginal mode only
    SweepVariable variable = SweepVariable::Nu;
    double lo = 1e-3;
    double hi = 10.0;
    int points = 400;
    Spacing spacing = Spacing::Log;
    SweepMode mode = SweepMode::Baseline;
    std::vector<Output> outputs{Output::Quality};

    /// Throws ConfigError on an empty range, too few points, or a variable/mode mismatch.
    void validate() const;
    /// Requested outputs deduplicated and sorted into canonical column order.
    std::vector<Output> canonical_outputs() const;
};

struct SweepRow {
    double x = 0.0;
    Regime regime = Regime::Disintermediated;
    std::vector<std::optional<double>> values;  ///< aligned with SweepResult::columns
};

struct SweepResult {
    SweepSpec spec;
    std::vector<Output> columns;
    std::vector<SweepRow> rows;
};

/// Sweep abscissae in ascending order. Consumer counts are rounded to integers and deduplicated.
std::vector<double> sweep_values(const SweepSpec& spec);

/// Evaluates one sweep point.
SweepRow evaluate_sweep_point(const SweepSpec& spec, const std::vector<Output>& columns, double x);

/// Evaluates every point concurrently; rows come back in sweep order.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0);

/// Shortest round-trip decimal; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

/// A header plus rows of preformatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

Table to_table(const SweepResult& result);
/// Comma-separated, header first, LF line endings.
std::string to_csv(const Table& table);

}  // namespace intermed

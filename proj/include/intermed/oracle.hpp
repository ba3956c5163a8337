#pragma once

/**
 * @file oracle.hpp
 * @brief Brute-force backward induction on discrete quality and price grids.
 *
 * The oracle never calls the analytic best-response or threshold code to decide
 * anything: consumers maximize w - nu g(w) over the grid, the intermediary
 * enumerates every grid quality, and suppliers enumerate a price grid. The
 * analytic module is only consulted to size the grids (so that they contain
 * the continuous optima) and, in compare_with_analytic, as the thing being
 * checked.
 */

#include "intermed/core.hpp"
#include "intermed/equilibrium.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace intermed {

enum class TiebreakRule {
    Baseline,            ///< consumers tie toward the intermediary
    MonopolistFootnote,  ///< consumers tie toward direct production when nu < footnote_switch_cost
};

enum class FeeMode { Fixed, Linear };

enum class CheckMode { Baseline, Monopolist, Marginal, LinearFee };

std::string_view to_string(CheckMode mode);

struct QualityGridSpec {
    double w_max = 0.0;  ///< 0 selects an adaptive bound per effective cost
    int points = 10001;
};

struct OracleConfig {
    QualityGridSpec quality_grid;
    /// Absolute supplier prices to search. Empty: use price_multipliers times rho*.
    std::vector<double> price_grid;
    std::vector<double> price_multipliers{0.5, 0.9, 1.0, 1.1, 2.0};
    TiebreakRule tiebreak = TiebreakRule::Baseline;
    double footnote_switch_cost = kInfiniteCost;
    double marginal_gamma = 0.0;
    FeeMode fee_mode = FeeMode::Fixed;
    int monopolist_price_points = 1500;  ///< log-spaced supplier prices per monopolist point
    int marginal_nu_points = 200;        ///< log-spaced costs per gamma in marginal sweeps
    double marginal_nu_lo = 1e-3;
    double marginal_nu_hi = 10.0;

    /// Throws ConfigError on fewer than 100 quality points, negative gamma, and similar.
    void validate() const;
};

struct OracleOutcome {
    Regime regime = Regime::Disintermediated;
    double nu = 0.0;
    EffectiveCost effective_cost;
    std::size_t intermediary_quality_index = 0;
    std::size_t consumer_quality_index = 0;
    double intermediary_quality = 0.0;
    double consumer_quality = 0.0;
    double intermediary_utility = 0.0;
    double consumer_utility = 0.0;       ///< realized per-consumer utility
    double direct_utility_grid = 0.0;    ///< best direct-production utility on the grid
    std::vector<double> supplier_profits;
    double grid_step = 0.0;
    double w_max = 0.0;
};

/// Stage 2-3 outcome at the given supplier prices.
OracleOutcome brute_force_subgame(const CostModel& model, const MarketParams& params, std::span<const double> prices,
                                  const OracleConfig& config);

struct Deviation {
    std::size_t supplier = 0;
    double price = 0.0;
    double gain = 0.0;
};

struct OracleEquilibrium {
    OracleOutcome outcome;
    std::vector<double> prices;
    std::vector<Deviation> deviations;  ///< profitable unilateral grid deviations (must be empty)
    std::vector<double> searched_prices;   ///< P == 1: every grid price tried, ascending
    std::vector<Regime> searched_regimes;  ///< P == 1: subgame regime at each searched price
};

/// P >= 2: checks every supplier's grid deviations from marginal-cost pricing.
/// P == 1: picks the profit-maximizing grid price (ties toward the higher price).
OracleEquilibrium brute_force_equilibrium(const CostModel& model, const MarketParams& params,
                                          const OracleConfig& config);

struct ComparisonPoint {
    double parameter = 0.0;  ///< gamma for marginal sweeps, otherwise equal to x
    double x = 0.0;          ///< swept cost (nu or rho*)
    Regime analytic_regime = Regime::Disintermediated;
    Regime oracle_regime = Regime::Disintermediated;
    double analytic_quality = 0.0;
    double oracle_quality = 0.0;
    double quality_gap = 0.0;
    double grid_step = 0.0;
    std::string analytic_label;
    std::string oracle_label;
    std::string note;

    bool regime_match() const { return analytic_regime == oracle_regime; }
    bool quality_match() const { return quality_gap <= grid_step; }
    bool label_match() const { return analytic_label == oracle_label; }
    bool ok() const { return regime_match() && quality_match() && label_match() && note.empty(); }
};

struct ComparisonReport {
    CheckMode mode = CheckMode::Baseline;
    std::vector<ComparisonPoint> points;
    std::vector<std::string> findings;  ///< failures not tied to a single point (boundaries)

    std::size_t failures() const;
    bool passed() const { return failures() == 0; }
    double max_quality_gap() const;
    double mean_quality_gap() const;
};

/// One comparison at cost x (nu for Baseline/Marginal, rho* for Monopolist/LinearFee).
ComparisonPoint compare_with_analytic(const CostModel& model, const MarketParams& params, const OracleConfig& config,
                                      CheckMode mode, double x);

struct OracleSweep {
    CheckMode mode = CheckMode::Baseline;
    CostModel model;
    MarketParams params;
    std::vector<double> values;  ///< nu, rho* or gamma depending on mode
    OracleConfig config;
};

/// Runs every point (in parallel) and, for marginal sweeps, the boundary check per gamma.
ComparisonReport run_oracle_sweep(const OracleSweep& sweep, unsigned workers = 0);

/// Reference sweeps: 50 log-spaced nu in [1e-3, 10]; 12 monopolist rho* spanning all four
/// pricing cases; gamma in {0, 0.25, 0.5}; linear fees over rho* in {0.01, 1, 100}.
/// All at beta = 2, alpha = 1 (0.5 for linear fees), C = 4.
OracleSweep standard_baseline_sweep();
OracleSweep standard_monopolist_sweep();
OracleSweep standard_marginal_sweep();
OracleSweep standard_linear_fee_sweep();

}  // namespace intermed

#pragma once

/**
 * @file metrics.hpp
 * @brief Equilibrium quality, utilities, welfare and planner benchmarks as functions of nu.
 *
 * Every function takes the effective cost nu directly so that sweeps can
 * evaluate counterfactual cost levels. The regime at nu is decided by the
 * sign of the disintermediation margin (intermediated iff Phi(nu) <= 0).
 */

#include "intermed/core.hpp"
#include "intermed/equilibrium.hpp"

#include <optional>
#include <string>

namespace intermed {

/// Quality every consumer ends up with: alpha + U(nu) when intermediated, w*(nu) otherwise.
double content_quality(const CostModel& model, const MarketParams& params, double nu);

/// alpha * C - nu * g(alpha + U(nu)) when intermediated, 0 otherwise.
double intermediary_utility(const CostModel& model, const MarketParams& params, double nu);

/// U(nu) in either regime. Depends on neither alpha nor C.
double consumer_utility(const CostModel& model, const MarketParams& params, double nu);

/// C * U(nu) + intermediary utility (fees are transfers, supplier profit is zero at cost).
double social_welfare(const CostModel& model, const MarketParams& params, double nu);

/// with: max_w (C w - nu g(w)) = C * U(nu / C). without: C * U(nu).
double planner_welfare(const CostModel& model, const MarketParams& params, double nu, bool with_intermediary);

struct BlissPoint {
    std::optional<double> nu;
    std::string diagnostic;
};

/// Cost level where equilibrium welfare meets the planner optimum with an intermediary,
/// i.e. alpha + U(nu) = w*(nu / C) inside the intermediated band. Power uses the explicit
/// formula; other families bisect the decreasing gap on [T_L, T_U].
BlissPoint bliss_point(const CostModel& model, const MarketParams& params);

/// The bisection route regardless of family (used to cross-check the explicit formula).
BlissPoint bliss_point_numeric(const CostModel& model, const MarketParams& params);

struct WelfareReport {
    Regime regime = Regime::Disintermediated;
    double consumer_utility = 0.0;       ///< per consumer
    double intermediary_utility = 0.0;
    double supplier_profit = 0.0;        ///< total; zero when suppliers price at marginal cost
    double social_welfare = 0.0;
    double planner_with_intermediary = 0.0;
    double planner_without_intermediary = 0.0;
    std::optional<double> bliss_point;
};

/// Full report at nu. `supplier_profit` is added to the accounting identity as given
/// (zero in the competitive baseline).
WelfareReport welfare_report(const CostModel& model, const MarketParams& params, double nu,
                             double supplier_profit = 0.0);

}  // namespace intermed

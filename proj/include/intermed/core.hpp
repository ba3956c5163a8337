#pragma once

/**
 * @file core.hpp
 * @brief Production-cost families and the consumer's direct-production best response.
 *
 * A cost model g(w) gives the cost of producing content of quality w at unit
 * cost factor; an agent facing cost factor nu pays nu * g(w). Every family
 * here is strictly increasing, strictly convex and strictly log-concave with
 * g(0) = g'(0) = 0:
 *
 *   Power         g(w) = w^beta
 *   PowerExpSqrt  g(w) = w^beta * exp(sqrt(w))
 *   PowerLog      g(w) = w^beta * log(1 + w)^eta
 *   PowerExp      g(w) = w^beta * exp(w)
 *
 * The exponential families are evaluated in log-space; values that overflow
 * are returned as +inf, which callers read as "cost exceeds any budget".
 */

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace intermed {

enum class CostFamily { Power, PowerExpSqrt, PowerLog, PowerExp };

std::string_view to_string(CostFamily family);
std::optional<CostFamily> parse_cost_family(std::string_view name);

struct CostModel {
    CostFamily family = CostFamily::Power;
    double beta = 2.0;  ///< primary exponent, > 1
    double eta = 2.0;   ///< secondary exponent, PowerLog only, > 1

    static CostModel power(double beta) { return {CostFamily::Power, beta, 2.0}; }
    static CostModel power_exp_sqrt(double beta) { return {CostFamily::PowerExpSqrt, beta, 2.0}; }
    static CostModel power_log(double beta, double eta) { return {CostFamily::PowerLog, beta, eta}; }
    static CostModel power_exp(double beta) { return {CostFamily::PowerExp, beta, 2.0}; }

    /// Throws PreconditionError unless beta > 1 (and eta > 1 for PowerLog).
    void validate() const;
};

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

struct MarketParams {
    double alpha = 1.0;          ///< per-consumer fee
    int consumers = 2;           ///< C >= 2
    int suppliers = 2;           ///< P >= 1
    double supply_cost = 1.0;    ///< supplier marginal cost factor rho*
    double human_cost = 0.0;     ///< human-driven cost factor rho^H added to any supplier price
    double manual_cost = 1.0;    ///< manual production cost factor rho_0, may be +inf

    void validate() const;
};

enum class CostSource { Supplier, Manual };

struct EffectiveCost {
    double nu = 0.0;
    CostSource source = CostSource::Supplier;
    std::size_t supplier = 0;  ///< cheapest supplier (lowest index on ties); meaningful when source == Supplier
};

/// nu = min(human_cost + min_i prices[i], manual_cost). Suppliers win ties against manual
/// production, lower indices win ties among suppliers.
EffectiveCost effective_cost(const MarketParams& params, std::span<const double> prices);

/// Effective cost when every supplier prices at marginal cost.
EffectiveCost competitive_cost(const MarketParams& params);

double eval_g(const CostModel& model, double w);
double eval_g_prime(const CostModel& model, double w);

/// log g(w) and log g'(w) for w > 0, computed without forming g.
double log_g(const CostModel& model, double w);
double log_g_prime(const CostModel& model, double w);

/// d log g'(w) / d log w, the elasticity of the marginal cost.
double marginal_cost_elasticity(const CostModel& model, double w);

/// nu * g(w), formed in log-space so that nu -> 0 with w -> inf stays finite.
double scaled_cost(const CostModel& model, double nu, double w);

/// g(w) / g'(w). Lies in (0, w] and is strictly increasing in w.
double log_ratio(const CostModel& model, double w);

/// Whether lim_{w->inf} g(w - g/g') / g'(w) = inf, which guarantees a positive lower
/// disintermediation threshold. Holds for every family except PowerExp.
bool satisfies_strong_condition(const CostModel& model);

/// w*(nu) = argmax_w (w - nu g(w)), the unique solution of nu g'(w) = 1.
double optimal_quality(const CostModel& model, double nu);

/// U(nu) = max_w (w - nu g(w)) >= 0. dU/dnu = -g(w*(nu)).
double max_direct_utility(const CostModel& model, double nu);

}  // namespace intermed

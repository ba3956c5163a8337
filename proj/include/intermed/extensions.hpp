#pragma once

/**
 * @file extensions.hpp
 * @brief Monopolist supplier, per-consumer distribution costs and linear fees for g(w) = w^beta.
 *
 * All three variants are only worked out for the power family; nothing here
 * accepts a CostModel.
 */

#include "intermed/equilibrium.hpp"

namespace intermed {

// ---------------------------------------------------------------------------
// Monopolist supplier (P = 1, manual production unavailable)

struct MonopolistThresholds {
    double lower = 0.0;  ///< T^mon_L, in (T_L / beta, T_L)
    double upper = 0.0;  ///< T^mon_U, in (T_U / beta, T_U)
    double t_lower = 0.0;  ///< baseline T_L used to build them
    double t_upper = 0.0;  ///< baseline T_U
};

/// Cost levels where the monopolist is indifferent between the markup price and holding
/// the price at a baseline threshold. Requires C > beta / (beta - 1).
MonopolistThresholds monopolist_thresholds(double beta, double alpha, double consumers);

enum class PricingCase {
    LowMarkup,     ///< rho* < T_L / beta: price beta * rho*, consumers produce directly
    HoldAtLower,   ///< price pinned at T_L, consumers still produce directly
    HoldAtUpper,   ///< price pinned at T_U, the intermediary serves everyone
    HighMarkup,    ///< rho* > T^mon_U: price beta * rho*, consumers produce directly
};

std::string_view to_string(PricingCase c);

struct MonopolistSolution {
    double price = 0.0;          ///< supplier price nu_1 (excluding the human cost)
    double effective_cost = 0.0; ///< price + human cost
    double t_mon_lower = 0.0;
    double t_mon_upper = 0.0;
    int usage = 0;               ///< consumers served by the intermediary: 0 or C
    PricingCase pricing_case = PricingCase::LowMarkup;
    bool profit_tie = false;     ///< marginal cost sits on a switching threshold
};

/// Optimal monopolist price for marginal cost `supply_cost`. A human cost rho^H shifts the
/// market-facing cost: the map is applied to rho* + rho^H and rho^H is taken back off the price.
MonopolistSolution monopolist_price(double beta, double alpha, double consumers, double supply_cost,
                                    double human_cost = 0.0);

/// Supplier profit at effective cost `nu` given marginal cost `rho` under the monopolist
/// consumer tiebreak: the intermediary serves everyone for nu in (T_L, T_U], consumers produce directly otherwise.
double monopolist_profit(double beta, double alpha, double consumers, double rho, double nu);

// ---------------------------------------------------------------------------
// Per-consumer distribution cost: serving n consumers costs nu * (1 + gamma * n) * g(w)

struct MarginalCostParams {
    double gamma = 0.0;
    double effective_consumers = 0.0;  ///< C' = C (1 + gamma) / (1 + gamma C)

    static MarginalCostParams make(double consumers, double gamma);
};

/// Baseline power-law thresholds at C', scaled by 1 / (1 + gamma).
Thresholds marginal_cost_thresholds(double beta, double alpha, double consumers, double gamma);

/// nu (1 + gamma C) g(alpha + U((1 + gamma) nu)) - alpha C; intermediated iff <= 0.
double marginal_cost_margin(double beta, double alpha, double consumers, double gamma, double nu);

// ---------------------------------------------------------------------------
// Linear fee: the intermediary charges alpha * w_M per consumer

struct LinearFeeParams {
    double alpha = 0.5;

    void validate() const;  ///< alpha strictly inside (0, 1)
};

/// C when alpha^{1/(beta-1)} (1 - alpha) >= C^{-1/(beta-1)} (beta^{-1/(beta-1)} - beta^{-beta/(beta-1)}),
/// else 0. Independent of every production cost parameter.
int linear_fee_usage(double beta, double alpha, double consumers);

/// Quality consumed at effective cost nu. When intermediated the intermediary picks the
/// larger of the participation bound U(nu) / (1 - alpha) and its unconstrained optimum
/// (alpha C / (beta nu))^{1/(beta-1)}; otherwise consumers produce w*(nu).
double linear_fee_quality(double beta, double alpha, double consumers, double nu);

}  // namespace intermed

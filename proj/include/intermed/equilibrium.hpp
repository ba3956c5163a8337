#pragma once

/**
 * @file equilibrium.hpp
 * @brief Disintermediation margin, regime thresholds and the competitive-supplier equilibrium.
 *
 * With effective cost nu the intermediary must deliver quality alpha + U(nu) to
 * keep a consumer, which costs nu * g(alpha + U(nu)) once regardless of the
 * audience size. It survives iff that cost does not exceed the fee revenue:
 *
 *   Phi(nu) = nu * g(alpha + U(nu)) - alpha * C <= 0.
 *
 * nu * g(alpha + U(nu)) is U-shaped in nu with minimum alpha at the unique
 * nu_T where g(w*)/g'(w*) = alpha, so intermediation occupies a closed band
 * [T_L, T_U] around nu_T.
 */

#include "intermed/core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace intermed {

enum class Regime { Intermediated, Disintermediated };
enum class ConsumerAction { Middleman, Direct };

std::string_view to_string(Regime regime);

struct Provider {
    CostSource kind = CostSource::Supplier;
    std::size_t index = 0;  ///< supplier index, unused for Manual

    friend bool operator==(const Provider&, const Provider&) = default;
};

struct Thresholds {
    std::optional<double> t_lower;  ///< nullopt: intermediation persists as nu -> 0
    std::optional<double> t_upper;  ///< nullopt: intermediation persists as nu -> inf
    double nu_min = 0.0;            ///< minimizer of Phi (interior or grid argmin)
    double phi_min = 0.0;           ///< Phi(nu_min)
    bool interior_minimum = true;   ///< nu_min solves g(w*)/g'(w*) = alpha exactly
    bool nonempty = true;           ///< some nu is intermediated (phi_min <= 0)
    std::string diagnostic;

    /// nu in the closed intermediation band.
    bool contains(double nu) const;
};

struct EquilibriumOutcome {
    Regime regime = Regime::Disintermediated;
    std::vector<double> supplier_prices;
    EffectiveCost effective_cost;
    double intermediary_quality = 0.0;
    std::optional<Provider> intermediary_provider;
    ConsumerAction consumer_action = ConsumerAction::Direct;
    double consumer_quality = 0.0;
    std::optional<Provider> consumer_provider;
};

/// Phi(nu) = nu * g(alpha + U(nu)) - alpha * C. Positive means disintermediation.
double disintermediation_margin(const CostModel& model, const MarketParams& params, double nu);
double disintermediation_margin(const CostModel& model, double alpha, double consumers, double nu);

/// Intermediation iff Phi(nu) <= 0 (consumers break ties toward the intermediary).
Regime regime_at(const CostModel& model, double alpha, double consumers, double nu);

struct MarginMinimum {
    double nu = 0.0;
    bool interior = true;  ///< false: g/g' never reaches alpha; nu is the argmin of a log grid
};

/// The nu minimizing nu * g(alpha + U(nu)), i.e. the solution of g(w*(nu))/g'(w*(nu)) = alpha.
/// When g/g' stays below alpha (PowerExp with alpha >= 1) the margin is increasing in nu and the
/// argmin of a log grid on [1e-12, 1e12] is reported with interior = false.
MarginMinimum interior_minimizer(const CostModel& model, double alpha);

/// Both roots of Phi around nu_T, by bracket search and bisection.
Thresholds compute_thresholds(const CostModel& model, const MarketParams& params);
Thresholds compute_thresholds(const CostModel& model, double alpha, double consumers);

/// Thresholds for g(w) = w^beta from the explicit scalar equation
///   nu^{-1/(beta(beta-1))} (beta^{-1/(beta-1)} - beta^{-beta/(beta-1)}) alpha^{-1/beta}
///     + nu^{1/beta} alpha^{(beta-1)/beta} = C^{1/beta}.
/// `consumers` may be fractional (effective audience sizes in the marginal-cost extension).
Thresholds closed_form_thresholds_power(double beta, double alpha, double consumers);

/// Subgame-perfect equilibrium with P >= 2 competing suppliers: every supplier prices at
/// marginal cost and the intermediary/consumers play the unique subgame outcome.
EquilibriumOutcome solve_equilibrium(const CostModel& model, const MarketParams& params);

/// Stage 2-3 outcome for an arbitrary price vector (baseline tie-breaking).
EquilibriumOutcome solve_subgame(const CostModel& model, const MarketParams& params,
                                 std::span<const double> prices);

namespace tolerance {
inline constexpr double kThresholdResidual = 1e-9;  ///< |Phi| <= this * alpha * C at a root
inline constexpr double kThresholdWidth = 1e-12;    ///< final bracket width relative to the root
inline constexpr double kUpperSearchCap = 1e12;
inline constexpr double kLowerSearchFloor = 1e-12;
}  // namespace tolerance

}  // namespace intermed

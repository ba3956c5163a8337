#include "intermed/equilibrium.hpp"

#include "intermed/errors.hpp"
#include "intermed/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace intermed {

namespace {

// Extra room below the nominal lower floor for strong-condition families, whose lower
// threshold is guaranteed to exist but can sit far below 1e-12 (large beta, large alpha).
constexpr double kDeepLowerFloor = 1e-300;

roots::BisectOptions threshold_options() {
    roots::BisectOptions opts;
    opts.geometric = true;
    opts.x_rel_tol = 1e-15;
    opts.max_iter = 400;
    return opts;
}

std::string format_root_failure(const char* which, const roots::RootResult& r) {
    std::ostringstream msg;
    msg << which << " root residual " << r.residual << " in bracket [" << r.lo << ", " << r.hi << "]";
    return msg.str();
}

void check_alpha_consumers(double alpha, double consumers) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("alpha must be > 0");
    if (!(consumers > 1.0) || !std::isfinite(consumers)) throw PreconditionError("consumers must be > 1");
}

// Bisect Phi on [lo, hi] (opposite signs) and verify the residual contract.
double solve_threshold(const std::function<double(double)>& phi, double lo, double hi, double alpha,
                       double consumers, const char* which) {
    const auto r = roots::bisect(phi, lo, hi, threshold_options());
    if (!(r.residual <= tolerance::kThresholdResidual * alpha * consumers)) {
        throw SolverError(format_root_failure(which, r));
    }
    return r.root;
}

}  // namespace

std::string_view to_string(Regime regime) {
    return regime == Regime::Intermediated ? "intermediated" : "disintermediated";
}

bool Thresholds::contains(double nu) const {
    if (!nonempty) return false;
    const bool above_lower = !t_lower || nu >= *t_lower;
    const bool below_upper = !t_upper || nu <= *t_upper;
    return above_lower && below_upper;
}

double disintermediation_margin(const CostModel& model, double alpha, double consumers, double nu) {
    if (!(nu > 0.0)) throw DomainError("disintermediation_margin: nu must be > 0");
    const double matched = alpha + max_direct_utility(model, nu);
    return scaled_cost(model, nu, matched) - alpha * consumers;
}

double disintermediation_margin(const CostModel& model, const MarketParams& params, double nu) {
    return disintermediation_margin(model, params.alpha, static_cast<double>(params.consumers), nu);
}

Regime regime_at(const CostModel& model, double alpha, double consumers, double nu) {
    return disintermediation_margin(model, alpha, consumers, nu) <= 0.0 ? Regime::Intermediated
                                                                        : Regime::Disintermediated;
}

MarginMinimum interior_minimizer(const CostModel& model, double alpha) {
    model.validate();
    if (!(alpha > 0.0)) throw DomainError("interior_minimizer: alpha must be > 0");

    // g/g' is strictly increasing from 0; find the quality where it equals alpha.
    auto gap = [&](double w) { return log_ratio(model, w) - alpha; };
    double hi = std::max(1.0, 2.0 * alpha * model.beta);
    while (gap(hi) < 0.0 && hi < 1e12) hi *= 4.0;

    if (gap(hi) < 0.0) {
        // Margin increasing everywhere; the infimum is approached as nu -> 0.
        double best_nu = tolerance::kLowerSearchFloor;
        double best = kInfiniteCost;
        constexpr int kGrid = 241;
        for (int i = 0; i < kGrid; ++i) {
            const double nu = std::pow(10.0, -12.0 + 24.0 * i / (kGrid - 1));
            const double value = disintermediation_margin(model, alpha, 1.0, nu);
            if (value < best) {
                best = value;
                best_nu = nu;
            }
        }
        return {best_nu, false};
    }

    double lo = std::min(1e-3, alpha);
    while (gap(lo) > 0.0 && lo > 1e-300) lo *= 1e-3;
    roots::BisectOptions opts;
    opts.geometric = true;
    opts.x_rel_tol = 1e-16;
    const auto r = roots::bisect(gap, lo, hi, opts);
    const double nu = std::exp(-log_g_prime(model, r.root));
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        return {nu > 0.0 ? nu : tolerance::kLowerSearchFloor, false};
    }
    return {nu, true};
}

Thresholds compute_thresholds(const CostModel& model, double alpha, double consumers) {
    model.validate();
    check_alpha_consumers(alpha, consumers);

    std::function<double(double)> phi = [&](double nu) {
        return disintermediation_margin(model, alpha, consumers, nu);
    };

    Thresholds out;
    const MarginMinimum minimum = interior_minimizer(model, alpha);
    out.nu_min = minimum.nu;
    out.interior_minimum = minimum.interior;
    out.phi_min = phi(minimum.nu);
    if (out.phi_min > 0.0) {
        out.nonempty = false;
        out.diagnostic = "margin positive at its minimum: no cost level supports intermediation";
        return out;
    }

    // Lower threshold: shrink from nu_T until the margin turns positive.
    // Strong-condition families are guaranteed a positive lower root, which may sit far below
    // the nominal floor, so their search continues down to the deep floor.
    const double floor = satisfies_strong_condition(model)
                             ? kDeepLowerFloor
                             : std::min(tolerance::kLowerSearchFloor, out.nu_min * 1e-9);
    auto positive = [&](double nu) { return phi(nu) > 0.0; };
    const std::optional<double> lower_bracket = roots::expand_until(positive, out.nu_min, 0.1, floor);
    if (lower_bracket) {
        const double hi = std::min(out.nu_min, *lower_bracket * 10.0);
        out.t_lower = solve_threshold(phi, *lower_bracket, hi, alpha, consumers, "lower");
    } else {
        std::ostringstream msg;
        msg << "margin non-positive down to nu=" << floor << "; ";
        out.diagnostic += msg.str();
    }

    // Upper threshold: double from nu_T until the margin turns positive.
    std::optional<double> upper_bracket = roots::expand_until(positive, out.nu_min, 2.0, tolerance::kUpperSearchCap);
    if (upper_bracket) {
        const double lo = std::max(out.nu_min, *upper_bracket * 0.5);
        out.t_upper = solve_threshold(phi, lo, *upper_bracket, alpha, consumers, "upper");
    } else {
        out.diagnostic += "margin non-positive up to nu=1e12; ";
    }
    return out;
}

Thresholds compute_thresholds(const CostModel& model, const MarketParams& params) {
    params.validate();
    return compute_thresholds(model, params.alpha, static_cast<double>(params.consumers));
}

Thresholds closed_form_thresholds_power(double beta, double alpha, double consumers) {
    if (!(beta > 1.0)) throw PreconditionError("closed_form_thresholds_power: beta must be > 1");
    check_alpha_consumers(alpha, consumers);

    const double k = std::pow(beta, -1.0 / (beta - 1.0)) - std::pow(beta, -beta / (beta - 1.0));
    const double a_low = k * std::pow(alpha, -1.0 / beta);
    const double a_high = std::pow(alpha, (beta - 1.0) / beta);
    const double e_low = -1.0 / (beta * (beta - 1.0));
    const double e_high = 1.0 / beta;
    // The left-hand side is the margin ratio (nu g(alpha+U)/alpha)^{1/beta}; scale the residual
    // back to margin units so the tolerance contract matches compute_thresholds.
    std::function<double(double)> f = [&](double nu) {
        const double lhs = a_low * std::pow(nu, e_low) + a_high * std::pow(nu, e_high);
        return alpha * (std::pow(lhs, beta) - consumers);
    };

    Thresholds out;
    // w*(nu_T) = alpha * beta, so nu_T = 1 / g'(alpha * beta).
    out.nu_min = 1.0 / (beta * std::pow(alpha * beta, beta - 1.0));
    out.phi_min = f(out.nu_min);
    out.interior_minimum = true;

    auto positive = [&](double nu) { return f(nu) > 0.0; };
    const auto lower_bracket = roots::expand_until(positive, out.nu_min, 0.1, kDeepLowerFloor);
    const auto upper_bracket = roots::expand_until(positive, out.nu_min, 2.0, tolerance::kUpperSearchCap);
    if (!lower_bracket || !upper_bracket) {
        throw SolverError("closed_form_thresholds_power: failed to bracket a threshold");
    }
    out.t_lower = solve_threshold(f, *lower_bracket, std::min(out.nu_min, *lower_bracket * 10.0), alpha, consumers,
                                  "lower");
    out.t_upper = solve_threshold(f, std::max(out.nu_min, *upper_bracket * 0.5), *upper_bracket, alpha, consumers,
                                  "upper");
    return out;
}

EquilibriumOutcome solve_subgame(const CostModel& model, const MarketParams& params,
                                 std::span<const double> prices) {
    model.validate();
    params.validate();
    EquilibriumOutcome out;
    out.supplier_prices.assign(prices.begin(), prices.end());
    out.effective_cost = effective_cost(params, prices);
    const double nu = out.effective_cost.nu;

    const Provider provider = out.effective_cost.source == CostSource::Manual
                                  ? Provider{CostSource::Manual, 0}
                                  : Provider{CostSource::Supplier, out.effective_cost.supplier};

    const double utility = max_direct_utility(model, nu);
    if (disintermediation_margin(model, params, nu) <= 0.0) {
        out.regime = Regime::Intermediated;
        out.intermediary_quality = params.alpha + utility;
        out.intermediary_provider = provider;
        out.consumer_action = ConsumerAction::Middleman;
        out.consumer_quality = out.intermediary_quality;
    } else {
        out.regime = Regime::Disintermediated;
        out.intermediary_quality = 0.0;
        out.consumer_action = ConsumerAction::Direct;
        out.consumer_quality = optimal_quality(model, nu);
        out.consumer_provider = provider;
    }
    return out;
}

EquilibriumOutcome solve_equilibrium(const CostModel& model, const MarketParams& params) {
    params.validate();
    if (params.suppliers < 2) {
        throw PreconditionError("solve_equilibrium: needs at least two competing suppliers; "
                                "use monopolist_price for a single supplier");
    }
    const std::vector<double> prices(static_cast<std::size_t>(params.suppliers), params.supply_cost);
    return solve_subgame(model, params, prices);
}

}  // namespace intermed

#include "intermed/extensions.hpp"

#include "intermed/errors.hpp"
#include "intermed/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace intermed {

namespace {

constexpr double kRootResidual = 1e-9;

void check_power_inputs(double beta, double alpha, double consumers, const char* op) {
    if (!(beta > 1.0) || !std::isfinite(beta)) throw PreconditionError(std::string(op) + ": beta must be > 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError(std::string(op) + ": alpha must be > 0");
    if (!(consumers >= 2.0) || !std::isfinite(consumers)) {
        throw PreconditionError(std::string(op) + ": consumers must be >= 2");
    }
}

// k = beta^{-1/(beta-1)} - beta^{-beta/(beta-1)}, so that U(nu) = k nu^{-1/(beta-1)}.
double utility_coefficient(double beta) {
    return std::pow(beta, -1.0 / (beta - 1.0)) - std::pow(beta, -beta / (beta - 1.0));
}

double solve_on(const std::function<double(double)>& f, double lo, double hi, const char* which) {
    roots::BisectOptions opts;
    opts.x_rel_tol = 1e-15;
    const auto r = roots::bisect(f, lo, hi, opts);
    if (!(r.residual <= kRootResidual)) {
        std::ostringstream msg;
        msg << "monopolist_thresholds: " << which << " residual " << r.residual << " on [" << r.lo << ", " << r.hi
            << "]";
        throw SolverError(msg.str());
    }
    return r.root;
}

}  // namespace

std::string_view to_string(PricingCase c) {
    switch (c) {
        case PricingCase::LowMarkup: return "low_markup";
        case PricingCase::HoldAtLower: return "hold_at_lower";
        case PricingCase::HoldAtUpper: return "hold_at_upper";
        case PricingCase::HighMarkup: return "high_markup";
    }
    return "unknown";
}

MonopolistThresholds monopolist_thresholds(double beta, double alpha, double consumers) {
    check_power_inputs(beta, alpha, consumers, "monopolist_thresholds");
    if (!(consumers > beta / (beta - 1.0))) {
        throw PreconditionError("monopolist_thresholds: needs C > beta / (beta - 1)");
    }
    const Thresholds base = closed_form_thresholds_power(beta, alpha, consumers);
    const double tl = *base.t_lower;
    const double tu = *base.t_upper;

    // Profit per unit of C from the markup price beta*nu against holding at T_U.
    const double markup_coef = (1.0 - 1.0 / beta) * std::pow(beta, -(beta + 1.0) / (beta - 1.0));
    std::function<double(double)> upper_gap = [&](double nu) {
        return markup_coef * std::pow(nu, -1.0 / (beta - 1.0)) - (1.0 - nu / tu) * alpha;
    };
    // T_L * g(w*(T_L)) = beta^{-beta/(beta-1)} T_L^{-1/(beta-1)}.
    const double hold_low = std::pow(beta, -beta / (beta - 1.0)) * std::pow(tl, -1.0 / (beta - 1.0));
    std::function<double(double)> lower_gap = [&](double nu) {
        return (1.0 - nu / tl) * hold_low - (1.0 - nu / tu) * alpha;
    };

    MonopolistThresholds out;
    out.t_lower = tl;
    out.t_upper = tu;
    out.upper = solve_on(upper_gap, tu / beta, tu, "upper");
    out.lower = solve_on(lower_gap, tl / beta, tl, "lower");
    return out;
}

MonopolistSolution monopolist_price(double beta, double alpha, double consumers, double supply_cost,
                                    double human_cost) {
    if (!(supply_cost > 0.0) || !std::isfinite(supply_cost)) {
        throw PreconditionError("monopolist_price: supply_cost must be finite and > 0");
    }
    if (!(human_cost >= 0.0) || !std::isfinite(human_cost)) {
        throw PreconditionError("monopolist_price: human_cost must be finite and >= 0");
    }
    const MonopolistThresholds mt = monopolist_thresholds(beta, alpha, consumers);
    const double rho = supply_cost + human_cost;

    MonopolistSolution out;
    out.t_mon_lower = mt.lower;
    out.t_mon_upper = mt.upper;
    double nu = 0.0;
    if (rho < mt.t_lower / beta) {
        out.pricing_case = PricingCase::LowMarkup;
        nu = beta * rho;
    } else if (rho <= mt.lower) {
        out.pricing_case = PricingCase::HoldAtLower;
        nu = mt.t_lower;
    } else if (rho <= mt.upper) {
        out.pricing_case = PricingCase::HoldAtUpper;
        nu = mt.t_upper;
        out.usage = static_cast<int>(consumers);
    } else {
        out.pricing_case = PricingCase::HighMarkup;
        nu = beta * rho;
    }
    out.profit_tie = rho == mt.lower || rho == mt.upper;
    out.effective_cost = nu;
    out.price = nu - human_cost;
    return out;
}

double monopolist_profit(double beta, double alpha, double consumers, double rho, double nu) {
    check_power_inputs(beta, alpha, consumers, "monopolist_profit");
    const Thresholds base = closed_form_thresholds_power(beta, alpha, consumers);
    const CostModel model = CostModel::power(beta);
    if (nu > *base.t_lower && nu <= *base.t_upper * (1.0 + 1e-12)) {
        // Inside the band the intermediary buys alpha + U(nu) once for everyone; at T_L consumers
        // still produce directly.
        const double w = alpha + max_direct_utility(model, nu);
        return (nu - rho) * eval_g(model, w);
    }
    const double w = optimal_quality(model, nu);
    return consumers * (nu - rho) * eval_g(model, w);
}

MarginalCostParams MarginalCostParams::make(double consumers, double gamma) {
    if (!(gamma >= 0.0) || !(gamma < 1.0)) throw PreconditionError("marginal costs: gamma must lie in [0, 1)");
    if (!(consumers >= 2.0)) throw PreconditionError("marginal costs: consumers must be >= 2");
    return {gamma, consumers * (1.0 + gamma) / (1.0 + gamma * consumers)};
}

Thresholds marginal_cost_thresholds(double beta, double alpha, double consumers, double gamma) {
    check_power_inputs(beta, alpha, consumers, "marginal_cost_thresholds");
    const MarginalCostParams mc = MarginalCostParams::make(consumers, gamma);
    Thresholds t = closed_form_thresholds_power(beta, alpha, mc.effective_consumers);
    const double scale = 1.0 / (1.0 + gamma);
    if (t.t_lower) t.t_lower = *t.t_lower * scale;
    if (t.t_upper) t.t_upper = *t.t_upper * scale;
    t.nu_min *= scale;
    return t;
}

double marginal_cost_margin(double beta, double alpha, double consumers, double gamma, double nu) {
    check_power_inputs(beta, alpha, consumers, "marginal_cost_margin");
    const MarginalCostParams mc = MarginalCostParams::make(consumers, gamma);
    if (!(nu > 0.0)) throw DomainError("marginal_cost_margin: nu must be > 0");
    const CostModel model = CostModel::power(beta);
    const double w = alpha + max_direct_utility(model, (1.0 + mc.gamma) * nu);
    return scaled_cost(model, nu * (1.0 + mc.gamma * consumers), w) - alpha * consumers;
}

void LinearFeeParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("linear fee: alpha must lie in (0, 1)");
}

int linear_fee_usage(double beta, double alpha, double consumers) {
    LinearFeeParams{alpha}.validate();
    check_power_inputs(beta, alpha, consumers, "linear_fee_usage");
    const double lhs = std::pow(alpha, 1.0 / (beta - 1.0)) * (1.0 - alpha);
    const double rhs = std::pow(consumers, -1.0 / (beta - 1.0)) * utility_coefficient(beta);
    return lhs >= rhs ? static_cast<int>(consumers) : 0;
}

double linear_fee_quality(double beta, double alpha, double consumers, double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("linear_fee_quality: nu must be finite and > 0");
    const CostModel model = CostModel::power(beta);
    if (linear_fee_usage(beta, alpha, consumers) == 0) return optimal_quality(model, nu);
    const double participation = max_direct_utility(model, nu) / (1.0 - alpha);
    const double unconstrained = std::pow(alpha * consumers / (beta * nu), 1.0 / (beta - 1.0));
    return std::max(participation, unconstrained);
}

}  // namespace intermed

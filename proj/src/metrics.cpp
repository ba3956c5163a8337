#include "intermed/metrics.hpp"

#include "intermed/errors.hpp"
#include "intermed/roots.hpp"

#include <cmath>
#include <sstream>

namespace intermed {

namespace {

double audience(const MarketParams& params) { return static_cast<double>(params.consumers); }

void check_nu(double nu, const char* op) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError(std::string(op) + ": nu must be finite and > 0");
}

bool intermediated(const CostModel& model, const MarketParams& params, double nu) {
    return disintermediation_margin(model, params, nu) <= 0.0;
}

}  // namespace

double content_quality(const CostModel& model, const MarketParams& params, double nu) {
    check_nu(nu, "content_quality");
    if (intermediated(model, params, nu)) return params.alpha + max_direct_utility(model, nu);
    return optimal_quality(model, nu);
}

double intermediary_utility(const CostModel& model, const MarketParams& params, double nu) {
    check_nu(nu, "intermediary_utility");
    const double phi = disintermediation_margin(model, params, nu);
    return phi <= 0.0 ? -phi : 0.0;
}

double consumer_utility(const CostModel& model, const MarketParams&, double nu) {
    check_nu(nu, "consumer_utility");
    return max_direct_utility(model, nu);
}

double social_welfare(const CostModel& model, const MarketParams& params, double nu) {
    check_nu(nu, "social_welfare");
    const double u = max_direct_utility(model, nu);
    const double c = audience(params);
    const double phi = disintermediation_margin(model, params, nu);
    if (phi > 0.0) return c * u;
    const double w = params.alpha + u;
    return c * w - scaled_cost(model, nu, w);
}

double planner_welfare(const CostModel& model, const MarketParams& params, double nu, bool with_intermediary) {
    check_nu(nu, "planner_welfare");
    const double c = audience(params);
    if (!with_intermediary) return c * max_direct_utility(model, nu);
    const double w = optimal_quality(model, nu / c);
    return c * w - scaled_cost(model, nu, w);
}

BlissPoint bliss_point_numeric(const CostModel& model, const MarketParams& params) {
    BlissPoint out;
    const Thresholds band = compute_thresholds(model, params);
    if (!band.nonempty || !band.t_lower || !band.t_upper) {
        out.diagnostic = "intermediated band is empty or unbounded";
        return out;
    }
    const double c = audience(params);
    auto gap = [&](double nu) {
        return params.alpha + max_direct_utility(model, nu) - optimal_quality(model, nu / c);
    };
    const double lo = *band.t_lower;
    const double hi = *band.t_upper;
    const double glo = gap(lo);
    const double ghi = gap(hi);
    if (std::signbit(glo) == std::signbit(ghi) && glo != 0.0 && ghi != 0.0) {
        std::ostringstream msg;
        msg << "no sign change of alpha + U(nu) - w*(nu/C) on [" << lo << ", " << hi << "]";
        out.diagnostic = msg.str();
        return out;
    }
    roots::BisectOptions opts;
    opts.geometric = true;
    opts.x_rel_tol = 1e-15;
    const auto r = roots::bisect(gap, lo, hi, opts);
    if (!r.converged) {
        out.diagnostic = "bisection did not converge";
        return out;
    }
    out.nu = r.root;
    return out;
}

BlissPoint bliss_point(const CostModel& model, const MarketParams& params) {
    model.validate();
    params.validate();
    if (model.family != CostFamily::Power) return bliss_point_numeric(model, params);

    const double b = model.beta;
    const double c = audience(params);
    const double p = 1.0 / (b - 1.0);
    const double denom = (std::pow(c, p) - 1.0) * std::pow(b, -p) + std::pow(b, -b * p);
    BlissPoint out;
    const double nu = std::pow(denom / params.alpha, b - 1.0);
    if (disintermediation_margin(model, params, nu) > 0.0) {
        out.diagnostic = "explicit bliss point lies outside the intermediated band";
        return out;
    }
    out.nu = nu;
    return out;
}

WelfareReport welfare_report(const CostModel& model, const MarketParams& params, double nu, double supplier_profit) {
    check_nu(nu, "welfare_report");
    WelfareReport r;
    const double c = audience(params);
    const double u = max_direct_utility(model, nu);
    const double phi = disintermediation_margin(model, params, nu);
    r.regime = phi <= 0.0 ? Regime::Intermediated : Regime::Disintermediated;
    r.consumer_utility = u;
    r.intermediary_utility = phi <= 0.0 ? -phi : 0.0;
    r.supplier_profit = supplier_profit;
    r.social_welfare = c * u + r.intermediary_utility + supplier_profit;
    r.planner_with_intermediary = planner_welfare(model, params, nu, true);
    r.planner_without_intermediary = c * u;
    r.bliss_point = bliss_point(model, params).nu;
    return r;
}

}  // namespace intermed

#include "intermed/core.hpp"

#include "intermed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace intermed {

namespace {

constexpr int kNewtonMaxIter = 200;
constexpr double kFirstOrderTol = 1e-10;

// log-space search window for w*: w in [1e-300, 1e300]
constexpr double kMinLogW = -690.0;
constexpr double kMaxLogW = 690.0;

void require_positive_quality(double w, const char* op) {
    if (!(w >= 0.0) || std::isnan(w)) {
        throw DomainError(std::string(op) + ": quality must be >= 0");
    }
}

}  // namespace

std::string_view to_string(CostFamily family) {
    switch (family) {
        case CostFamily::Power: return "power";
        case CostFamily::PowerExpSqrt: return "powerexpsqrt";
        case CostFamily::PowerLog: return "powerlog";
        case CostFamily::PowerExp: return "powerexp";
    }
    return "unknown";
}

std::optional<CostFamily> parse_cost_family(std::string_view name) {
    if (name == "power") return CostFamily::Power;
    if (name == "powerexpsqrt" || name == "power-exp-sqrt") return CostFamily::PowerExpSqrt;
    if (name == "powerlog" || name == "power-log") return CostFamily::PowerLog;
    if (name == "powerexp" || name == "power-exp") return CostFamily::PowerExp;
    return std::nullopt;
}

void CostModel::validate() const {
    if (!(beta > 1.0) || !std::isfinite(beta)) {
        throw PreconditionError("cost model: beta must be a finite value > 1");
    }
    if (family == CostFamily::PowerLog && (!(eta > 1.0) || !std::isfinite(eta))) {
        throw PreconditionError("cost model: eta must be a finite value > 1 for the power-log family");
    }
}

void MarketParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("market: alpha must be > 0");
    if (consumers < 2) throw PreconditionError("market: consumers must be >= 2");
    if (suppliers < 1) throw PreconditionError("market: suppliers must be >= 1");
    if (!(supply_cost > 0.0) || !std::isfinite(supply_cost)) {
        throw PreconditionError("market: supply_cost must be a finite value > 0");
    }
    if (!(human_cost >= 0.0) || !std::isfinite(human_cost)) {
        throw PreconditionError("market: human_cost must be a finite value >= 0");
    }
    if (!(manual_cost > 0.0)) throw PreconditionError("market: manual_cost must be > 0 (or inf)");
}

EffectiveCost effective_cost(const MarketParams& params, std::span<const double> prices) {
    EffectiveCost out;
    double cheapest = kInfiniteCost;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (prices[i] < cheapest) {
            cheapest = prices[i];
            out.supplier = i;
        }
    }
    const double via_supplier = params.human_cost + cheapest;
    if (!prices.empty() && via_supplier <= params.manual_cost) {
        out.nu = via_supplier;
        out.source = CostSource::Supplier;
    } else {
        out.nu = params.manual_cost;
        out.source = CostSource::Manual;
    }
    if (!(out.nu > 0.0) || !std::isfinite(out.nu)) {
        throw DomainError("effective cost must be finite and > 0");
    }
    return out;
}

EffectiveCost competitive_cost(const MarketParams& params) {
    const double price = params.supply_cost;
    return effective_cost(params, std::span<const double>(&price, 1));
}

double log_g(const CostModel& model, double w) {
    if (!(w > 0.0)) {
        if (w == 0.0) return -kInfiniteCost;
        throw DomainError("log_g: quality must be >= 0");
    }
    const double lw = std::log(w);
    switch (model.family) {
        case CostFamily::Power: return model.beta * lw;
        case CostFamily::PowerExpSqrt: return model.beta * lw + std::sqrt(w);
        case CostFamily::PowerLog: return model.beta * lw + model.eta * std::log(std::log1p(w));
        case CostFamily::PowerExp: return model.beta * lw + w;
    }
    return 0.0;
}

double log_g_prime(const CostModel& model, double w) {
    if (!(w > 0.0)) {
        if (w == 0.0) return -kInfiniteCost;
        throw DomainError("log_g_prime: quality must be >= 0");
    }
    const double b = model.beta;
    const double lw = std::log(w);
    switch (model.family) {
        case CostFamily::Power: return std::log(b) + (b - 1.0) * lw;
        case CostFamily::PowerExpSqrt: {
            const double s = std::sqrt(w);
            return (b - 1.0) * lw + s + std::log(b + 0.5 * s);
        }
        case CostFamily::PowerLog: {
            const double l = std::log1p(w);
            return (b - 1.0) * lw + (model.eta - 1.0) * std::log(l) + std::log(b * l + model.eta * w / (1.0 + w));
        }
        case CostFamily::PowerExp: return (b - 1.0) * lw + w + std::log(b + w);
    }
    return 0.0;
}

double marginal_cost_elasticity(const CostModel& model, double w) {
    if (!(w > 0.0)) throw DomainError("marginal_cost_elasticity: quality must be > 0");
    const double b = model.beta;
    switch (model.family) {
        case CostFamily::Power: return b - 1.0;
        case CostFamily::PowerExpSqrt: {
            const double s = std::sqrt(w);
            return (b - 1.0) + 0.5 * s + 0.25 * s / (b + 0.5 * s);
        }
        case CostFamily::PowerLog: {
            const double l = std::log1p(w);
            const double e = model.eta;
            const double inner = b * l + e * w / (1.0 + w);
            const double inner_slope = w * (b / (1.0 + w) + e / ((1.0 + w) * (1.0 + w)));
            return (b - 1.0) + (e - 1.0) * w / ((1.0 + w) * l) + inner_slope / inner;
        }
        case CostFamily::PowerExp: return (b - 1.0) + w + w / (b + w);
    }
    return 0.0;
}

double eval_g(const CostModel& model, double w) {
    require_positive_quality(w, "eval_g");
    if (w == 0.0) return 0.0;
    if (model.family == CostFamily::Power) return std::pow(w, model.beta);
    return std::exp(log_g(model, w));
}

double eval_g_prime(const CostModel& model, double w) {
    require_positive_quality(w, "eval_g_prime");
    if (w == 0.0) return 0.0;
    if (model.family == CostFamily::Power) return model.beta * std::pow(w, model.beta - 1.0);
    return std::exp(log_g_prime(model, w));
}

double scaled_cost(const CostModel& model, double nu, double w) {
    require_positive_quality(w, "scaled_cost");
    if (w == 0.0) return 0.0;
    if (std::isinf(nu)) return kInfiniteCost;
    return std::exp(std::log(nu) + log_g(model, w));
}

double log_ratio(const CostModel& model, double w) {
    if (!(w > 0.0)) throw DomainError("log_ratio: quality must be > 0");
    const double b = model.beta;
    switch (model.family) {
        case CostFamily::Power: return w / b;
        case CostFamily::PowerExpSqrt: return w / (b + 0.5 * std::sqrt(w));
        case CostFamily::PowerLog: return w / (b + model.eta * w / ((1.0 + w) * std::log1p(w)));
        case CostFamily::PowerExp: return w / (b + w);
    }
    return 0.0;
}

bool satisfies_strong_condition(const CostModel& model) {
    return model.family != CostFamily::PowerExp;
}

double optimal_quality(const CostModel& model, double nu) {
    model.validate();
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("optimal_quality: nu must be finite and > 0");

    const double b = model.beta;
    if (model.family == CostFamily::Power) {
        return std::pow(nu * b, -1.0 / (b - 1.0));
    }

    // Solve phi(x) = log(nu * g'(e^x)) = 0; phi is strictly increasing in x.
    const double log_nu = std::log(nu);
    auto phi = [&](double x) { return log_g_prime(model, std::exp(x)) + log_nu; };

    double x = std::clamp(-std::log(nu * b) / (b - 1.0), kMinLogW, kMaxLogW);
    double fx = phi(x);
    double lo = x, hi = x;
    double flo = fx, fhi = fx;
    for (double step = 1.0; flo > 0.0; step *= 2.0) {
        if (lo <= kMinLogW) break;
        lo = std::max(kMinLogW, lo - step);
        flo = phi(lo);
    }
    for (double step = 1.0; fhi < 0.0; step *= 2.0) {
        if (hi >= kMaxLogW) break;
        hi = std::min(kMaxLogW, hi + step);
        fhi = phi(hi);
    }
    if (flo > 0.0 || fhi < 0.0) {
        std::ostringstream msg;
        msg << "optimal_quality: no sign change for nu=" << nu << " in w=[" << std::exp(lo) << ", " << std::exp(hi) << "]";
        throw SolverError(msg.str());
    }

    // Safeguarded Newton: bisect whenever the Newton step leaves the bracket or fails to halve
    // the previous step (far from the root the exponential families crawl otherwise).
    double prev_step = hi - lo;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
        if (std::abs(fx) <= 1e-15) break;
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double next = x - fx / marginal_cost_elasticity(model, std::exp(x));
        if (!(next > lo && next < hi) || 2.0 * std::abs(next - x) > prev_step) next = 0.5 * (lo + hi);
        prev_step = std::abs(next - x);
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            x = next;
            fx = phi(x);
            break;
        }
        x = next;
        fx = phi(x);
    }

    const double w = std::exp(x);
    const double residual = std::expm1(fx);
    if (!(std::abs(residual) <= kFirstOrderTol)) {
        std::ostringstream msg;
        msg << "optimal_quality: first-order residual " << residual << " at w=" << w << " for nu=" << nu
            << ", bracket w=[" << std::exp(lo) << ", " << std::exp(hi) << "]";
        throw SolverError(msg.str());
    }
    return w;
}

double max_direct_utility(const CostModel& model, double nu) {
    const double w = optimal_quality(model, nu);
    return std::max(0.0, w - scaled_cost(model, nu, w));
}

}  // namespace intermed

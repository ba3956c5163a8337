#include "intermed/sweep.hpp"

#include "intermed/errors.hpp"
#include "intermed/extensions.hpp"
#include "intermed/metrics.hpp"
#include "intermed/parallel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace intermed {

namespace {

constexpr std::array<std::pair<Output, std::string_view>, 8> kOutputNames{{
    {Output::Quality, "quality"},
    {Output::IntermediaryUtility, "intermediary_utility"},
    {Output::ConsumerUtility, "consumer_utility"},
    {Output::SocialWelfare, "social_welfare"},
    {Output::PlannerWith, "planner_with"},
    {Output::PlannerWithout, "planner_without"},
    {Output::Margin, "margin"},
    {Output::Usage, "usage"},
}};

bool allowed(SweepMode mode, SweepVariable v) {
    switch (mode) {
        case SweepMode::Baseline: return v != SweepVariable::Gamma;
        case SweepMode::Monopolist: return v == SweepVariable::SupplyCost || v == SweepVariable::Alpha ||
                                           v == SweepVariable::Consumers;
        case SweepMode::Marginal: return true;
        case SweepMode::LinearFee: return v != SweepVariable::Gamma;
    }
    return false;
}

// Everything a row needs, computed once per point.
struct PointState {
    Regime regime = Regime::Disintermediated;
    double quality = 0.0;
    double intermediary = 0.0;
    double consumer = 0.0;
    double social = 0.0;
    double planner_with = 0.0;
    double planner_without = 0.0;
    std::optional<double> margin;
    double usage = 0.0;
};

PointState baseline_point(const CostModel& model, const MarketParams& params, double nu) {
    const WelfareReport w = welfare_report(model, params, nu);
    PointState s;
    s.regime = w.regime;
    s.quality = content_quality(model, params, nu);
    s.intermediary = w.intermediary_utility;
    s.consumer = w.consumer_utility;
    s.social = w.social_welfare;
    s.planner_with = w.planner_with_intermediary;
    s.planner_without = w.planner_without_intermediary;
    s.margin = disintermediation_margin(model, params, nu);
    s.usage = w.regime == Regime::Intermediated ? params.consumers : 0.0;
    return s;
}

// Welfare in the extensions is evaluated at the market-facing cost; planner benchmarks use the
// resource cost rho* + rho^H, which is what a planner would pay.
PointState monopolist_point(const CostModel& model, const MarketParams& params) {
    const double c = static_cast<double>(params.consumers);
    const MonopolistSolution sol =
        monopolist_price(model.beta, params.alpha, c, params.supply_cost, params.human_cost);
    const double nu = sol.effective_cost;
    const double u = max_direct_utility(model, nu);
    PointState s;
    s.usage = sol.usage;
    s.consumer = u;
    s.margin = disintermediation_margin(model, params, nu);
    double units = 0.0;
    if (sol.usage > 0) {
        s.regime = Regime::Intermediated;
        s.quality = params.alpha + u;
        s.intermediary = std::max(0.0, params.alpha * c - scaled_cost(model, nu, s.quality));
        units = eval_g(model, s.quality);
    } else {
        s.quality = optimal_quality(model, nu);
        units = c * eval_g(model, s.quality);
    }
    const double profit = (sol.price - params.supply_cost) * units;
    s.social = c * u + s.intermediary + profit;
    const double resource = params.supply_cost + params.human_cost;
    s.planner_with = planner_welfare(model, params, resource, true);
    s.planner_without = planner_welfare(model, params, resource, false);
    return s;
}

PointState marginal_point(const CostModel& model, const MarketParams& params, double gamma, double nu) {
    const double c = static_cast<double>(params.consumers);
    const double margin = marginal_cost_margin(model.beta, params.alpha, c, gamma, nu);
    const double nu_direct = (1.0 + gamma) * nu;
    const double nu_serve = (1.0 + gamma * c) * nu;
    const double u = max_direct_utility(model, nu_direct);
    PointState s;
    s.margin = margin;
    s.consumer = u;
    if (margin <= 0.0) {
        s.regime = Regime::Intermediated;
        s.quality = params.alpha + u;
        s.intermediary = -margin;
        s.usage = c;
    } else {
        s.quality = optimal_quality(model, nu_direct);
    }
    s.social = c * u + s.intermediary;
    const double w = optimal_quality(model, nu_serve / c);
    s.planner_with = c * w - scaled_cost(model, nu_serve, w);
    s.planner_without = c * u;
    return s;
}

PointState linear_fee_point(const CostModel& model, const MarketParams& params, double nu) {
    const double c = static_cast<double>(params.consumers);
    PointState s;
    s.usage = linear_fee_usage(model.beta, params.alpha, c);
    s.quality = linear_fee_quality(model.beta, params.alpha, c, nu);
    if (s.usage > 0) {
        s.regime = Regime::Intermediated;
        s.consumer = (1.0 - params.alpha) * s.quality;
        s.intermediary = params.alpha * c * s.quality - scaled_cost(model, nu, s.quality);
    } else {
        s.consumer = max_direct_utility(model, nu);
    }
    s.social = c * s.consumer + s.intermediary;
    s.planner_with = planner_welfare(model, params, nu, true);
    s.planner_without = planner_welfare(model, params, nu, false);
    return s;
}

}  // namespace

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::Nu: return "nu";
        case SweepVariable::Alpha: return "alpha";
        case SweepVariable::Consumers: return "C";
        case SweepVariable::Gamma: return "gamma";
        case SweepVariable::SupplyCost: return "supply_cost";
    }
    return "unknown";
}

std::string_view to_string(Spacing s) { return s == Spacing::Log ? "log" : "linear"; }

std::string_view to_string(SweepMode m) {
    switch (m) {
        case SweepMode::Baseline: return "baseline";
        case SweepMode::Monopolist: return "monopolist";
        case SweepMode::Marginal: return "marginal";
        case SweepMode::LinearFee: return "linear_fee";
    }
    return "unknown";
}

std::string_view to_string(Output o) {
    for (const auto& [out, name] : kOutputNames) {
        if (out == o) return name;
    }
    return "unknown";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
    if (name == "nu") return SweepVariable::Nu;
    if (name == "alpha") return SweepVariable::Alpha;
    if (name == "C" || name == "consumers") return SweepVariable::Consumers;
    if (name == "gamma") return SweepVariable::Gamma;
    if (name == "supply_cost" || name == "rho") return SweepVariable::SupplyCost;
    return std::nullopt;
}

std::optional<Spacing> parse_spacing(std::string_view name) {
    if (name == "log") return Spacing::Log;
    if (name == "linear") return Spacing::Linear;
    return std::nullopt;
}

std::optional<SweepMode> parse_sweep_mode(std::string_view name) {
    if (name == "baseline") return SweepMode::Baseline;
    if (name == "monopolist") return SweepMode::Monopolist;
    if (name == "marginal") return SweepMode::Marginal;
    if (name == "linear_fee" || name == "linear-fee") return SweepMode::LinearFee;
    return std::nullopt;
}

std::optional<Output> parse_output(std::string_view name) {
    for (const auto& [out, n] : kOutputNames) {
        if (n == name) return out;
    }
    return std::nullopt;
}

void SweepSpec::validate() const {
    model.validate();
    params.validate();
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("sweep: need finite lo < hi");
    if (points < 2) throw ConfigError("sweep: need at least 2 points");
    if (spacing == Spacing::Log && !(lo > 0.0)) throw ConfigError("sweep: log spacing needs lo > 0");
    if (!allowed(mode, variable)) {
        throw ConfigError("sweep: variable '" + std::string(to_string(variable)) + "' is not available in mode '" +
                          std::string(to_string(mode)) + "'");
    }
    if (mode != SweepMode::Baseline && model.family != CostFamily::Power) {
        throw ConfigError("sweep: extension modes support the power family only");
    }
    if (outputs.empty()) throw ConfigError("sweep: no outputs requested");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("sweep: gamma must lie in [0, 1)");
    if (variable == SweepVariable::Consumers && lo < 2.0) throw ConfigError("sweep: consumers must be >= 2");
    if (variable == SweepVariable::Gamma && !(hi < 1.0 && lo >= 0.0)) throw ConfigError("sweep: gamma range in [0, 1)");
    if (mode == SweepMode::LinearFee && variable != SweepVariable::Alpha && !(params.alpha < 1.0)) {
        throw ConfigError("sweep: linear fees need alpha in (0, 1)");
    }
}

std::vector<Output> SweepSpec::canonical_outputs() const {
    std::set<Output> unique(outputs.begin(), outputs.end());
    return {unique.begin(), unique.end()};
}

std::vector<double> sweep_values(const SweepSpec& spec) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(spec.points));
    for (int i = 0; i < spec.points; ++i) {
        const double t = static_cast<double>(i) / (spec.points - 1);
        double x = spec.spacing == Spacing::Log ? std::exp(std::log(spec.lo) + t * (std::log(spec.hi) - std::log(spec.lo)))
                                                : spec.lo + t * (spec.hi - spec.lo);
        if (i == 0) x = spec.lo;
        if (i == spec.points - 1) x = spec.hi;
        if (spec.variable == SweepVariable::Consumers) x = std::round(x);
        xs.push_back(x);
    }
    if (spec.variable == SweepVariable::Consumers) xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

SweepRow evaluate_sweep_point(const SweepSpec& spec, const std::vector<Output>& columns, double x) {
    MarketParams params = spec.params;
    double gamma = spec.gamma;
    std::optional<double> nu_override;
    switch (spec.variable) {
        case SweepVariable::Nu: nu_override = x; break;
        case SweepVariable::Alpha: params.alpha = x; break;
        case SweepVariable::Consumers: params.consumers = static_cast<int>(x); break;
        case SweepVariable::Gamma: gamma = x; break;
        case SweepVariable::SupplyCost: params.supply_cost = x; break;
    }
    if (spec.mode == SweepMode::Monopolist) {
        params.suppliers = 1;
        params.manual_cost = kInfiniteCost;
    }
    const double nu = nu_override ? *nu_override : competitive_cost(params).nu;

    PointState s;
    switch (spec.mode) {
        case SweepMode::Baseline: s = baseline_point(spec.model, params, nu); break;
        case SweepMode::Monopolist: s = monopolist_point(spec.model, params); break;
        case SweepMode::Marginal: s = marginal_point(spec.model, params, gamma, nu); break;
        case SweepMode::LinearFee: s = linear_fee_point(spec.model, params, nu); break;
    }

    SweepRow row;
    row.x = x;
    row.regime = s.regime;
    for (Output o : columns) {
        switch (o) {
            case Output::Quality: row.values.emplace_back(s.quality); break;
            case Output::IntermediaryUtility: row.values.emplace_back(s.intermediary); break;
            case Output::ConsumerUtility: row.values.emplace_back(s.consumer); break;
            case Output::SocialWelfare: row.values.emplace_back(s.social); break;
            case Output::PlannerWith: row.values.emplace_back(s.planner_with); break;
            case Output::PlannerWithout: row.values.emplace_back(s.planner_without); break;
            case Output::Margin: row.values.push_back(s.margin); break;
            case Output::Usage: row.values.emplace_back(s.usage); break;
        }
    }
    return row;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
    spec.validate();
    SweepResult result;
    result.spec = spec;
    result.columns = spec.canonical_outputs();
    const std::vector<double> xs = sweep_values(spec);
    result.rows = parallel_map(
        xs.size(), [&](std::size_t i) { return evaluate_sweep_point(spec, result.columns, xs[i]); }, workers);
    return result;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_number(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string("null");
}

Table to_table(const SweepResult& result) {
    Table t;
    t.columns.emplace_back(to_string(result.spec.variable));
    t.columns.emplace_back("regime");
    for (Output o : result.columns) t.columns.emplace_back(to_string(o));
    for (const auto& row : result.rows) {
        std::vector<std::string> cells;
        cells.push_back(format_number(row.x));
        cells.emplace_back(to_string(row.regime));
        for (const auto& v : row.values) cells.push_back(format_number(v));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::string to_csv(const Table& table) {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(table.columns);
    for (const auto& r : table.rows) line(r);
    return out.str();
}

}  // namespace intermed

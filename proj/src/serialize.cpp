#include "intermed/serialize.hpp"

#include "intermed/errors.hpp"

#include <cmath>

namespace intermed {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

json cost_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double cost_from(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).is_null() ? kInfiniteCost : j.at(key).get<double>();
}

template <class E, class Parse>
E parse_enum(const json& j, const char* key, E fallback, Parse parse) {
    if (!j.contains(key)) return fallback;
    const auto name = j.at(key).get<std::string>();
    const auto v = parse(name);
    if (!v) throw ConfigError(std::string("unknown ") + key + " '" + name + "'");
    return *v;
}

}  // namespace

json to_json(const Thresholds& t) {
    return {
        {"t_lower", optional_number(t.t_lower)},
        {"t_upper", optional_number(t.t_upper)},
        {"nu_min", t.nu_min},
        {"phi_min", t.phi_min},
        {"interior_minimum", t.interior_minimum},
        {"nonempty", t.nonempty},
        {"diagnostic", t.diagnostic},
    };
}

Thresholds thresholds_from_json(const json& j) {
    Thresholds t;
    t.t_lower = read_optional(j, "t_lower");
    t.t_upper = read_optional(j, "t_upper");
    t.nu_min = j.at("nu_min").get<double>();
    t.phi_min = j.at("phi_min").get<double>();
    t.interior_minimum = j.value("interior_minimum", true);
    t.nonempty = j.value("nonempty", true);
    t.diagnostic = j.value("diagnostic", std::string());
    return t;
}

json to_json(const CostModel& m) {
    return {{"family", std::string(to_string(m.family))}, {"beta", m.beta}, {"eta", m.eta}};
}

CostModel cost_model_from_json(const json& j) {
    CostModel m;
    m.family = parse_enum(j, "family", m.family, parse_cost_family);
    m.beta = j.value("beta", m.beta);
    m.eta = j.value("eta", m.eta);
    return m;
}

json to_json(const MarketParams& p) {
    return {
        {"alpha", p.alpha},
        {"consumers", p.consumers},
        {"suppliers", p.suppliers},
        {"supply_cost", p.supply_cost},
        {"human_cost", p.human_cost},
        {"manual_cost", cost_or_null(p.manual_cost)},
    };
}

MarketParams market_params_from_json(const json& j) {
    MarketParams p;
    p.alpha = j.value("alpha", p.alpha);
    p.consumers = j.value("consumers", p.consumers);
    p.suppliers = j.value("suppliers", p.suppliers);
    p.supply_cost = j.value("supply_cost", p.supply_cost);
    p.human_cost = j.value("human_cost", p.human_cost);
    p.manual_cost = cost_from(j, "manual_cost", p.manual_cost);
    return p;
}

json to_json(const SweepSpec& s) {
    json outputs = json::array();
    for (Output o : s.canonical_outputs()) outputs.push_back(std::string(to_string(o)));
    return {
        {"model", to_json(s.model)},
        {"params", to_json(s.params)},
        {"gamma", s.gamma},
        {"variable", std::string(to_string(s.variable))},
        {"lo", s.lo},
        {"hi", s.hi},
        {"points", s.points},
        {"spacing", std::string(to_string(s.spacing))},
        {"mode", std::string(to_string(s.mode))},
        {"outputs", outputs},
    };
}

SweepSpec sweep_spec_from_json(const json& j) {
    SweepSpec s;
    if (j.contains("model")) s.model = cost_model_from_json(j.at("model"));
    if (j.contains("params")) s.params = market_params_from_json(j.at("params"));
    s.gamma = j.value("gamma", s.gamma);
    s.variable = parse_enum(j, "variable", s.variable, parse_sweep_variable);
    s.lo = j.value("lo", s.lo);
    s.hi = j.value("hi", s.hi);
    s.points = j.value("points", s.points);
    s.spacing = parse_enum(j, "spacing", s.spacing, parse_spacing);
    s.mode = parse_enum(j, "mode", s.mode, parse_sweep_mode);
    if (j.contains("outputs")) {
        s.outputs.clear();
        for (const auto& name : j.at("outputs")) {
            const auto o = parse_output(name.get<std::string>());
            if (!o) throw ConfigError("unknown output '" + name.get<std::string>() + "'");
            s.outputs.push_back(*o);
        }
    }
    return s;
}

json to_json(const WelfareReport& r) {
    return {
        {"regime", std::string(to_string(r.regime))},
        {"consumer_utility", r.consumer_utility},
        {"intermediary_utility", r.intermediary_utility},
        {"supplier_profit", r.supplier_profit},
        {"social_welfare", r.social_welfare},
        {"planner_with_intermediary", r.planner_with_intermediary},
        {"planner_without_intermediary", r.planner_without_intermediary},
        {"bliss_point", optional_number(r.bliss_point)},
    };
}

json to_json(const MonopolistSolution& s) {
    return {
        {"price", s.price},
        {"effective_cost", s.effective_cost},
        {"t_mon_lower", s.t_mon_lower},
        {"t_mon_upper", s.t_mon_upper},
        {"usage", s.usage},
        {"pricing_case", std::string(to_string(s.pricing_case))},
        {"profit_tie", s.profit_tie},
    };
}

json to_json(const ComparisonReport& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back({
            {"parameter", p.parameter},
            {"x", p.x},
            {"analytic_regime", std::string(to_string(p.analytic_regime))},
            {"oracle_regime", std::string(to_string(p.oracle_regime))},
            {"analytic_quality", p.analytic_quality},
            {"oracle_quality", p.oracle_quality},
            {"quality_gap", p.quality_gap},
            {"grid_step", p.grid_step},
            {"analytic_label", p.analytic_label},
            {"oracle_label", p.oracle_label},
            {"note", p.note},
            {"ok", p.ok()},
        });
    }
    return {
        {"mode", std::string(to_string(r.mode))},
        {"passed", r.passed()},
        {"failures", r.failures()},
        {"findings", r.findings},
        {"max_quality_gap", r.max_quality_gap()},
        {"points", points},
    };
}

json tolerance_metadata() {
    return {
        {"threshold_residual_rel", tolerance::kThresholdResidual},
        {"threshold_width_rel", tolerance::kThresholdWidth},
        {"upper_search_cap", tolerance::kUpperSearchCap},
        {"lower_search_floor", tolerance::kLowerSearchFloor},
        {"first_order_abs", 1e-12},
        {"newton_max_iter", 200},
    };
}

}  // namespace intermed

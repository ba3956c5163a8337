#include "intermed/figures.hpp"

#include "intermed/errors.hpp"
#include "intermed/extensions.hpp"
#include "intermed/metrics.hpp"
#include "intermed/serialize.hpp"

#include <cmath>
#include <fstream>

namespace intermed {

namespace {

using nlohmann::json;

constexpr double kBeta = 2.0;
constexpr double kNuLo = 1e-3;
constexpr double kNuHi = 10.0;
constexpr int kNuPoints = 400;

const std::vector<double> kAlphaPanel{0.5, 1.0, 2.0};
const std::vector<int> kConsumerPanel{2, 4, 8};

json base_metadata(const std::string& id, const std::string& title) {
    return {
        {"figure", id},
        {"title", title},
        {"reconstruction", true},
        {"note", "parameter values are reconstructions chosen to match the published shapes"},
        {"engine_version", kEngineVersion},
        {"tolerances", tolerance_metadata()},
        {"cost_model", to_json(CostModel::power(kBeta))},
    };
}

std::string optional_cell(const std::optional<double>& v) { return format_number(v); }

FigureData band_over_alpha() {
    FigureData f{"2a", "Intermediated band of production costs against the fee", {}, {}};
    f.table.columns = {"alpha", "t_lower", "t_upper", "nu_min"};
    const int points = 200;
    const double lo = 0.05, hi = 20.0;
    for (int i = 0; i < points; ++i) {
        const double a = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
        const Thresholds t = closed_form_thresholds_power(kBeta, a, 4.0);
        f.table.rows.push_back({format_number(a), optional_cell(t.t_lower), optional_cell(t.t_upper),
                                format_number(t.nu_min)});
    }
    f.metadata = base_metadata(f.id, f.title);
    f.metadata["parameters"] = {{"consumers", 4}, {"alpha_range", {lo, hi}}, {"alpha_points", points},
                                {"alpha_spacing", "log"}};
    return f;
}

FigureData band_over_consumers() {
    FigureData f{"2b", "Intermediated band of production costs against the number of consumers", {}, {}};
    f.table.columns = {"C", "t_lower", "t_upper", "nu_min"};
    for (int c = 2; c <= 32; ++c) {
        const Thresholds t = closed_form_thresholds_power(kBeta, 1.0, c);
        f.table.rows.push_back({std::to_string(c), optional_cell(t.t_lower), optional_cell(t.t_upper),
                                format_number(t.nu_min)});
    }
    f.metadata = base_metadata(f.id, f.title);
    f.metadata["parameters"] = {{"alpha", 1.0}, {"consumers_range", {2, 32}}};
    return f;
}

// Metric curves over nu for three fees (panel a) or three audience sizes (panel b).
FigureData metric_curves(const std::string& id, const std::string& title, const std::vector<Output>& outputs) {
    const bool by_alpha = id.back() == 'a';
    FigureData f{id, title, {}, {}};
    f.table.columns = {by_alpha ? "alpha" : "C", "nu", "regime"};
    for (Output o : outputs) f.table.columns.emplace_back(to_string(o));

    json series = json::array();
    const std::size_t count = by_alpha ? kAlphaPanel.size() : kConsumerPanel.size();
    for (std::size_t k = 0; k < count; ++k) {
        SweepSpec spec;
        spec.model = CostModel::power(kBeta);
        spec.params.alpha = by_alpha ? kAlphaPanel[k] : 1.0;
        spec.params.consumers = by_alpha ? 4 : kConsumerPanel[k];
        spec.params.manual_cost = kInfiniteCost;
        spec.variable = SweepVariable::Nu;
        spec.lo = kNuLo;
        spec.hi = kNuHi;
        spec.points = kNuPoints;
        spec.outputs = outputs;
        const SweepResult r = run_sweep(spec);
        const std::string label = by_alpha ? format_number(spec.params.alpha) : std::to_string(spec.params.consumers);
        for (const auto& row : r.rows) {
            std::vector<std::string> cells{label, format_number(row.x), std::string(to_string(row.regime))};
            for (const auto& v : row.values) cells.push_back(format_number(v));
            f.table.rows.push_back(std::move(cells));
        }
        const Thresholds t = compute_thresholds(spec.model, spec.params);
        json s = {{by_alpha ? "alpha" : "C", by_alpha ? json(spec.params.alpha) : json(spec.params.consumers)},
                  {"thresholds", to_json(t)}};
        if (id[0] == '7') {
            const BlissPoint b = bliss_point(spec.model, spec.params);
            s["bliss_point"] = b.nu ? json(*b.nu) : json(nullptr);
        }
        series.push_back(s);
    }
    f.metadata = base_metadata(id, title);
    f.metadata["parameters"] = {
        {"varied", by_alpha ? "alpha" : "C"},
        {"values", by_alpha ? json(kAlphaPanel) : json(kConsumerPanel)},
        {"fixed", by_alpha ? json{{"consumers", 4}} : json{{"alpha", 1.0}}},
        {"nu_range", {kNuLo, kNuHi}},
        {"nu_points", kNuPoints},
        {"nu_spacing", "log"},
    };
    f.metadata["series"] = series;
    return f;
}

FigureData monopolist_band() {
    FigureData f{"8a", "Intermediated band with a monopolist supplier against the number of consumers", {}, {}};
    f.table.columns = {"C", "t_lower", "t_upper", "t_mon_lower", "t_mon_upper"};
    for (int c = 3; c <= 32; ++c) {
        const MonopolistThresholds m = monopolist_thresholds(kBeta, 1.0, c);
        f.table.rows.push_back({std::to_string(c), format_number(m.t_lower), format_number(m.t_upper),
                                format_number(m.lower), format_number(m.upper)});
    }
    f.metadata = base_metadata(f.id, f.title);
    f.metadata["parameters"] = {{"alpha", 1.0}, {"consumers_range", {3, 32}}};
    return f;
}

FigureData marginal_band() {
    FigureData f{"8b", "Intermediated band under per-consumer distribution costs", {}, {}};
    f.table.columns = {"gamma", "C", "t_lower", "t_upper"};
    const std::vector<double> gammas{0.0, 0.1, 0.25, 0.5};
    for (double g : gammas) {
        for (int c = 2; c <= 32; ++c) {
            const Thresholds t = marginal_cost_thresholds(kBeta, 1.0, c, g);
            f.table.rows.push_back(
                {format_number(g), std::to_string(c), optional_cell(t.t_lower), optional_cell(t.t_upper)});
        }
    }
    f.metadata = base_metadata(f.id, f.title);
    f.metadata["parameters"] = {{"alpha", 1.0}, {"gamma", gammas}, {"consumers_range", {2, 32}}};
    return f;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"2a", "2b", "4a", "4b", "5a", "5b",
                                              "6a", "6b", "7a", "7b", "8a", "8b"};
    return ids;
}

FigureData make_figure(const std::string& id) {
    if (id == "2a") return band_over_alpha();
    if (id == "2b") return band_over_consumers();
    if (id == "4a" || id == "4b") return metric_curves(id, "Quality of consumed content against production costs", {Output::Quality});
    if (id == "5a" || id == "5b") {
        return metric_curves(id, "Intermediary utility against production costs", {Output::IntermediaryUtility});
    }
    if (id == "6a" || id == "6b") {
        return metric_curves(id, "Consumer utility against production costs", {Output::ConsumerUtility});
    }
    if (id == "7a" || id == "7b") {
        return metric_curves(id, "Social welfare against production costs",
                             {Output::SocialWelfare, Output::PlannerWith, Output::PlannerWithout});
    }
    if (id == "8a") return monopolist_band();
    if (id == "8b") return marginal_band();
    throw ConfigError("unknown figure id '" + id + "'");
}

void write_figure(const FigureData& fig, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto csv_path = dir / ("figure_" + fig.id + ".csv");
    const auto json_path = dir / ("figure_" + fig.id + ".json");
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw ConfigError("cannot write " + csv_path.string());
    csv << to_csv(fig.table);
    std::ofstream meta(json_path, std::ios::binary);
    if (!meta) throw ConfigError("cannot write " + json_path.string());
    meta << fig.metadata.dump(2) << '\n';
    if (!csv || !meta) throw ConfigError("write failed in " + dir.string());
}

}  // namespace intermed

#include "intermed/cli.hpp"

#include "intermed/errors.hpp"
#include "intermed/figures.hpp"
#include "intermed/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace intermed::cli {

namespace {

using nlohmann::json;

struct Options {
    bool json = false;
    std::string out;

    std::string family = "power";
    double beta = 2.0;
    double eta = 2.0;
    MarketParams params;

    bool closed_form = false;

    std::string variable = "nu";
    double lo = 1e-3;
    double hi = 10.0;
    int points = 400;
    std::string spacing = "log";
    std::string mode = "baseline";
    std::vector<std::string> outputs{"quality"};
    double gamma = 0.0;

    int grid_points = 10001;
    double grid_w_max = 0.0;

    std::vector<std::string> figure_ids;
};

CostModel build_model(const Options& o) {
    const auto family = parse_cost_family(o.family);
    if (!family) throw ConfigError("unknown cost family '" + o.family + "'");
    CostModel m{*family, o.beta, o.eta};
    m.validate();
    return m;
}

template <class T, class Parse>
T parse_or_throw(const std::string& text, Parse parse, const char* what) {
    const auto v = parse(text);
    if (!v) throw ConfigError(std::string("unknown ") + what + " '" + text + "'");
    return *v;
}

SweepSpec build_sweep(const Options& o) {
    SweepSpec s;
    s.model = build_model(o);
    s.params = o.params;
    s.gamma = o.gamma;
    s.variable = parse_or_throw<SweepVariable>(o.variable, parse_sweep_variable, "sweep variable");
    s.lo = o.lo;
    s.hi = o.hi;
    s.points = o.points;
    s.spacing = parse_or_throw<Spacing>(o.spacing, parse_spacing, "spacing");
    s.mode = parse_or_throw<SweepMode>(o.mode, parse_sweep_mode, "mode");
    s.outputs.clear();
    for (const auto& name : o.outputs) s.outputs.push_back(parse_or_throw<Output>(name, parse_output, "output"));
    s.validate();
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
    } else {
        write_text(o.out, text);
    }
}

int cmd_thresholds(const Options& o, std::ostream& out) {
    const CostModel model = build_model(o);
    o.params.validate();
    Thresholds t;
    if (o.closed_form) {
        if (model.family != CostFamily::Power) throw ConfigError("--closed-form needs the power family");
        t = closed_form_thresholds_power(model.beta, o.params.alpha, o.params.consumers);
    } else {
        t = compute_thresholds(model, o.params);
    }
    if (o.json) {
        emit(o, out, to_json(t).dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream text;
    text << "t_lower=" << format_number(t.t_lower) << '\n'
         << "t_upper=" << format_number(t.t_upper) << '\n'
         << "nu_min=" << format_number(t.nu_min) << '\n'
         << "phi_min=" << format_number(t.phi_min) << '\n';
    if (!t.diagnostic.empty()) text << "diagnostic=" << t.diagnostic << '\n';
    emit(o, out, text.str());
    return kExitOk;
}

json sweep_metadata(const SweepResult& r) {
    json columns = json::array({std::string(to_string(r.spec.variable)), "regime"});
    for (Output c : r.columns) columns.push_back(std::string(to_string(c)));
    return {
        {"spec", to_json(r.spec)},
        {"columns", columns},
        {"rows", r.rows.size()},
        {"engine_version", kEngineVersion},
        {"tolerances", tolerance_metadata()},
    };
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const SweepSpec spec = build_sweep(o);
    const SweepResult result = run_sweep(spec);
    const Table table = to_table(result);
    if (o.json) {
        json doc = sweep_metadata(result);
        json rows = json::array();
        for (const auto& row : table.rows) rows.push_back(row);
        doc["data"] = rows;
        emit(o, out, doc.dump(2) + "\n");
        return kExitOk;
    }
    emit(o, out, to_csv(table));
    if (!o.out.empty()) write_text(o.out + ".json", sweep_metadata(result).dump(2) + "\n");
    return kExitOk;
}

OracleSweep oracle_sweep_for(CheckMode mode, const Options& o, const CLI::App& app) {
    OracleSweep s;
    switch (mode) {
        case CheckMode::Baseline: s = standard_baseline_sweep(); break;
        case CheckMode::Monopolist: s = standard_monopolist_sweep(); break;
        case CheckMode::Marginal: s = standard_marginal_sweep(); break;
        case CheckMode::LinearFee: s = standard_linear_fee_sweep(); break;
    }
    // Explicit flags replace the reference sweep's settings.
    if (app.count("--beta")) s.model.beta = o.beta;
    if (app.count("--alpha")) s.params.alpha = o.params.alpha;
    if (app.count("--consumers")) s.params.consumers = o.params.consumers;
    if (app.count("--lo") || app.count("--hi")) {
        SweepSpec range;
        range.variable = mode == CheckMode::Marginal ? SweepVariable::Gamma : SweepVariable::SupplyCost;
        range.lo = o.lo;
        range.hi = o.hi;
        range.points = o.points;
        range.spacing = parse_or_throw<Spacing>(o.spacing, parse_spacing, "spacing");
        if (!(range.lo < range.hi) || range.points < 2) throw ConfigError("oracle-check: need lo < hi and points >= 2");
        if (range.spacing == Spacing::Log && !(range.lo > 0.0)) throw ConfigError("oracle-check: log spacing needs lo > 0");
        s.values = sweep_values(range);
    }
    s.config.quality_grid.points = o.grid_points;
    s.config.quality_grid.w_max = o.grid_w_max;
    s.config.validate();
    return s;
}

int cmd_oracle_check(const Options& o, std::ostream& out, const CLI::App& app) {
    std::vector<CheckMode> modes;
    if (o.mode == "all") {
        modes = {CheckMode::Baseline, CheckMode::Monopolist, CheckMode::Marginal, CheckMode::LinearFee};
    } else {
        const auto m = parse_sweep_mode(o.mode);
        if (!m) throw ConfigError("unknown mode '" + o.mode + "'");
        switch (*m) {
            case SweepMode::Baseline: modes = {CheckMode::Baseline}; break;
            case SweepMode::Monopolist: modes = {CheckMode::Monopolist}; break;
            case SweepMode::Marginal: modes = {CheckMode::Marginal}; break;
            case SweepMode::LinearFee: modes = {CheckMode::LinearFee}; break;
        }
    }

    bool all_ok = true;
    json reports = json::array();
    std::ostringstream text;
    for (CheckMode mode : modes) {
        const ComparisonReport r = run_oracle_sweep(oracle_sweep_for(mode, o, app));
        all_ok = all_ok && r.passed();
        reports.push_back(to_json(r));
        const auto agree = std::count_if(r.points.begin(), r.points.end(), [](const auto& p) { return p.ok(); });
        text << to_string(mode) << ": " << agree << "/" << r.points.size() << " points agree, max quality gap "
             << format_number(r.max_quality_gap()) << (r.passed() ? ", PASS" : ", FAIL") << '\n';
        for (const auto& p : r.points) {
            if (p.ok()) continue;
            text << "  mismatch parameter=" << format_number(p.parameter) << " x=" << format_number(p.x)
                 << " regime analytic=" << to_string(p.analytic_regime) << " oracle=" << to_string(p.oracle_regime)
                 << " quality analytic=" << format_number(p.analytic_quality)
                 << " oracle=" << format_number(p.oracle_quality) << " step=" << format_number(p.grid_step);
            if (!p.analytic_label.empty() || !p.oracle_label.empty()) {
                text << " label analytic=" << p.analytic_label << " oracle=" << p.oracle_label;
            }
            if (!p.note.empty()) text << " note=" << p.note;
            text << '\n';
        }
        for (const auto& f : r.findings) text << "  finding " << f << '\n';
    }
    const json doc = {{"passed", all_ok}, {"reports", reports}};
    if (o.json) {
        out << doc.dump(2) << '\n';
    } else {
        out << text.str();
    }
    if (!o.out.empty()) write_text(o.out, doc.dump(2) + "\n");
    return all_ok ? kExitOk : kExitVerificationFailed;
}

int cmd_figures(const Options& o, std::ostream& out) {
    std::vector<std::string> ids = o.figure_ids;
    if (ids.empty() || (ids.size() == 1 && ids.front() == "all")) ids = figure_ids();
    for (const auto& id : ids) {
        if (std::find(figure_ids().begin(), figure_ids().end(), id) == figure_ids().end()) {
            throw ConfigError("unknown figure id '" + id + "'");
        }
    }
    const std::filesystem::path dir = o.out.empty() ? std::filesystem::path("figures") : std::filesystem::path(o.out);
    for (const auto& id : ids) {
        const FigureData fig = make_figure(id);
        write_figure(fig, dir);
        out << (dir / ("figure_" + id + ".csv")).string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibrium, threshold and welfare engine for intermediated content markets", "intermed"};
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);

    Options o;
    app.add_flag("--json", o.json, "Emit JSON instead of text/CSV");
    app.add_option("--out", o.out, "Output file (directory for figures)");

    app.add_option("--family", o.family, "power | powerexpsqrt | powerlog | powerexp")->capture_default_str();
    app.add_option("--beta", o.beta, "Primary cost exponent (> 1)")->capture_default_str();
    app.add_option("--eta", o.eta, "Secondary exponent for powerlog (> 1)")->capture_default_str();
    app.add_option("--alpha", o.params.alpha, "Per-consumer fee")->capture_default_str();
    app.add_option("--consumers,-C", o.params.consumers, "Number of consumers (>= 2)")->capture_default_str();
    app.add_option("--suppliers", o.params.suppliers, "Number of suppliers")->capture_default_str();
    app.add_option("--supply-cost,--supply_cost", o.params.supply_cost, "Supplier marginal cost rho*")
        ->capture_default_str();
    app.add_option("--human-cost,--human_cost", o.params.human_cost, "Human cost rho^H")->capture_default_str();
    app.add_option("--manual-cost,--manual_cost", o.params.manual_cost, "Manual production cost rho_0 (inf allowed)")
        ->capture_default_str();

    app.add_option("--variable", o.variable, "nu | alpha | C | gamma | supply_cost")->capture_default_str();
    app.add_option("--lo", o.lo, "Sweep lower bound")->capture_default_str();
    app.add_option("--hi", o.hi, "Sweep upper bound")->capture_default_str();
    app.add_option("--points", o.points, "Sweep points")->capture_default_str();
    app.add_option("--spacing", o.spacing, "log | linear")->capture_default_str();
    app.add_option("--mode", o.mode, "baseline | monopolist | marginal | linear_fee (oracle-check also: all)")
        ->capture_default_str();
    app.add_option("--outputs", o.outputs, "Comma-separated outputs")->delimiter(',')->capture_default_str();
    app.add_option("--gamma", o.gamma, "Per-consumer distribution cost factor")->capture_default_str();
    app.add_flag("--closed-form,--closed_form", o.closed_form, "Use the power-law closed form for thresholds");
    app.add_option("--grid-points,--grid_points", o.grid_points, "Oracle quality grid points")->capture_default_str();
    app.add_option("--grid-w-max,--grid_w_max", o.grid_w_max, "Oracle quality grid upper end (0 = adaptive)")
        ->capture_default_str();

    auto* thresholds = app.add_subcommand("thresholds", "Disintermediation thresholds T_L, T_U and the margin minimum");
    auto* sweep = app.add_subcommand("sweep", "One-parameter sweep written as CSV");
    auto* oracle = app.add_subcommand("oracle-check", "Compare the analytic solver with the brute-force oracle");
    auto* figures = app.add_subcommand("figures", "Write figure data series (CSV + JSON metadata)");
    figures->add_option("ids", o.figure_ids, "Figure ids (default: all)");
    for (auto* sub : {thresholds, sweep, oracle, figures}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*thresholds) return cmd_thresholds(o, out);
        if (*sweep) return cmd_sweep(o, out);
        if (*oracle) return cmd_oracle_check(o, out, app);
        if (*figures) return cmd_figures(o, out);
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitVerificationFailed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
    return kExitUsage;
}

}  // namespace intermed::cli

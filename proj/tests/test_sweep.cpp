#include "intermed/errors.hpp"
#include "intermed/figures.hpp"
#include "intermed/serialize.hpp"
#include "intermed/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

using namespace intermed;

namespace {

SweepSpec quality_sweep() {
    SweepSpec s;
    s.model = CostModel::power(2.0);
    s.params.alpha = 1.0;
    s.params.consumers = 4;
    s.params.manual_cost = kInfiniteCost;
    s.lo = 1e-3;
    s.hi = 10.0;
    s.points = 400;
    s.outputs = {Output::Quality};
    return s;
}

std::size_t column(const Table& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    return static_cast<std::size_t>(it - t.columns.begin());
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.25), "1.25");
    EXPECT_EQ(format_number(3.0), "3");
    EXPECT_EQ(format_number(kInfiniteCost), "inf");
    EXPECT_EQ(format_number(std::optional<double>{}), "null");
    const double x = 0.017949192431122807;
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(SweepValues, LogAndLinear) {
    SweepSpec s = quality_sweep();
    s.points = 5;
    s.lo = 1e-2;
    s.hi = 1e2;
    const auto v = sweep_values(s);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_DOUBLE_EQ(v.front(), 1e-2);
    EXPECT_DOUBLE_EQ(v.back(), 1e2);
    EXPECT_NEAR(v[2], 1.0, 1e-12);
    s.spacing = Spacing::Linear;
    EXPECT_NEAR(sweep_values(s)[1], 25.0075, 1e-9);
}

TEST(SweepValues, ConsumerCountsAreIntegral) {
    SweepSpec s = quality_sweep();
    s.variable = SweepVariable::Consumers;
    s.lo = 2;
    s.hi = 6;
    s.points = 20;
    s.spacing = Spacing::Linear;
    EXPECT_EQ(sweep_values(s), (std::vector<double>{2, 3, 4, 5, 6}));
}

TEST(SweepSpecValidation, Rejections) {
    SweepSpec s = quality_sweep();
    s.lo = 5;
    s.hi = 1;
    EXPECT_THROW(s.validate(), ConfigError);
    s = quality_sweep();
    s.points = 1;
    EXPECT_THROW(s.validate(), ConfigError);
    s = quality_sweep();
    s.variable = SweepVariable::Gamma;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Sweep, ColumnOrderIsCanonical) {
    SweepSpec s = quality_sweep();
    s.points = 3;
    s.outputs = {Output::Margin, Output::Quality, Output::SocialWelfare, Output::Quality};
    const Table t = to_table(run_sweep(s));
    EXPECT_EQ(t.columns, (std::vector<std::string>{"nu", "regime", "quality", "social_welfare", "margin"}));
}

TEST(Sweep, DeterministicBytes) {
    SweepSpec s = quality_sweep();
    s.outputs = {Output::Quality, Output::IntermediaryUtility, Output::ConsumerUtility, Output::SocialWelfare,
                 Output::PlannerWith, Output::PlannerWithout, Output::Margin};
    const std::string a = to_csv(to_table(run_sweep(s, 1)));
    const std::string b = to_csv(to_table(run_sweep(s, 4)));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find('\r'), std::string::npos);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 401);
}

TEST(Sweep, QualityDecreasesWithDownwardJumpsAtThresholds) {
    const SweepResult r = run_sweep(quality_sweep());
    int switches = 0;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        EXPECT_LT(*r.rows[i].values[0], *r.rows[i - 1].values[0]) << r.rows[i].x;
        if (r.rows[i].regime != r.rows[i - 1].regime) ++switches;
    }
    EXPECT_EQ(switches, 2);
}

TEST(Sweep, IntermediaryUtilityIsInverseU) {
    SweepSpec s = quality_sweep();
    s.points = 2001;
    s.outputs = {Output::IntermediaryUtility};
    const SweepResult r = run_sweep(s);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (*r.rows[i].values[0] > *r.rows[arg].values[0]) arg = i;
    }
    EXPECT_NEAR(*r.rows[arg].values[0], 3.0, 1e-4);
    EXPECT_NEAR(std::log(r.rows[arg].x / 0.25), 0.0, std::log(10.0) * 4.0 / 2000.0);
}

TEST(Sweep, LinearFeeUsageConstantInSupplyCost) {
    SweepSpec s = quality_sweep();
    s.mode = SweepMode::LinearFee;
    s.params.alpha = 0.5;
    s.variable = SweepVariable::SupplyCost;
    s.lo = 1e-3;
    s.hi = 1e3;
    s.points = 25;
    s.outputs = {Output::Usage};
    const SweepResult r = run_sweep(s);
    for (const auto& row : r.rows) EXPECT_EQ(*row.values[0], 4.0);
}

TEST(Sweep, MonopolistUsageAndMarginalMode) {
    SweepSpec s = quality_sweep();
    s.mode = SweepMode::Monopolist;
    s.params.suppliers = 1;
    s.variable = SweepVariable::SupplyCost;
    s.points = 40;
    s.outputs = {Output::Usage, Output::Quality};
    for (const auto& row : run_sweep(s).rows) {
        EXPECT_EQ(row.regime == Regime::Intermediated, *row.values[1] == 4.0);
    }
    SweepSpec m = quality_sweep();
    m.mode = SweepMode::Marginal;
    m.gamma = 0.5;
    m.points = 50;
    m.outputs = {Output::Margin};
    for (const auto& row : run_sweep(m).rows) {
        EXPECT_EQ(row.regime == Regime::Intermediated, *row.values[0] <= 0.0);
    }
}

TEST(Serialize, ThresholdsRoundTripWithNull) {
    Thresholds t = compute_thresholds(CostModel::power_exp(2.0), 1.5, 4.0);
    const nlohmann::json j = to_json(t);
    EXPECT_TRUE(j.at("t_lower").is_null());
    const Thresholds back = thresholds_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_FALSE(back.t_lower.has_value());
    EXPECT_EQ(back.t_upper, t.t_upper);
    EXPECT_EQ(back.nu_min, t.nu_min);
    EXPECT_EQ(back.phi_min, t.phi_min);
}

TEST(Serialize, SweepSpecRoundTrip) {
    SweepSpec s = quality_sweep();
    s.model = CostModel::power_log(1.7, 2.3);
    s.outputs = {Output::Usage, Output::Quality};
    s.mode = SweepMode::LinearFee;
    s.params.alpha = 0.4;
    const SweepSpec back = sweep_spec_from_json(nlohmann::json::parse(to_json(s).dump()));
    EXPECT_EQ(back.model.family, s.model.family);
    EXPECT_EQ(back.model.beta, s.model.beta);
    EXPECT_EQ(back.model.eta, s.model.eta);
    EXPECT_TRUE(std::isinf(back.params.manual_cost));
    EXPECT_EQ(back.params.alpha, 0.4);
    EXPECT_EQ(back.canonical_outputs(), s.canonical_outputs());
    EXPECT_EQ(back.mode, s.mode);
    EXPECT_EQ(back.points, s.points);
    EXPECT_EQ(to_json(back), to_json(s));
}

TEST(Figures, AllIdsProduceTables) {
    for (const auto& id : figure_ids()) {
        const FigureData f = make_figure(id);
        EXPECT_FALSE(f.table.rows.empty()) << id;
        EXPECT_TRUE(f.metadata.contains("parameters")) << id;
        for (const auto& row : f.table.rows) EXPECT_EQ(row.size(), f.table.columns.size()) << id;
    }
    EXPECT_THROW(make_figure("3c"), ConfigError);
}

TEST(Figures, BandWidensWithAudience) {
    const FigureData f = make_figure("2b");
    const std::size_t lo = column(f.table, "t_lower"), hi = column(f.table, "t_upper");
    ASSERT_LT(lo, f.table.columns.size());
    ASSERT_LT(hi, f.table.columns.size());
    for (std::size_t i = 1; i < f.table.rows.size(); ++i) {
        EXPECT_LT(std::stod(f.table.rows[i][lo]), std::stod(f.table.rows[i - 1][lo]));
        EXPECT_GT(std::stod(f.table.rows[i][hi]), std::stod(f.table.rows[i - 1][hi]));
    }
}

TEST(Figures, ConsumerUtilityIdenticalAcrossPanels) {
    for (const char* id : {"6a", "6b"}) {
        const FigureData f = make_figure(id);
        const std::size_t nu = column(f.table, "nu"), u = column(f.table, "consumer_utility");
        ASSERT_LT(u, f.table.columns.size()) << id;
        std::map<std::string, std::string> first;
        for (const auto& row : f.table.rows) {
            const auto [it, inserted] = first.emplace(row[nu], row[u]);
            if (!inserted) EXPECT_EQ(it->second, row[u]) << id << " nu=" << row[nu];
        }
        EXPECT_EQ(first.size() * 3, f.table.rows.size()) << id;
    }
}

TEST(Figures, WritesCsvAndJson) {
    const auto dir = std::filesystem::temp_directory_path() / "intermed_fig_test";
    std::filesystem::remove_all(dir);
    write_figure(make_figure("4a"), dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "figure_4a.csv"));
    std::ifstream in(dir / "figure_4a.json");
    const nlohmann::json meta = nlohmann::json::parse(in);
    EXPECT_EQ(meta.at("figure"), "4a");
    std::filesystem::remove_all(dir);
}

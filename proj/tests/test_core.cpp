#include "intermed/core.hpp"
#include "intermed/errors.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace intermed;

namespace {

std::vector<CostModel> all_families() {
    return {CostModel::power(2.0), CostModel::power(3.5), CostModel::power_exp_sqrt(2.0),
            CostModel::power_log(1.5, 2.0), CostModel::power_log(3.0, 1.2), CostModel::power_exp(2.0),
            CostModel::power_exp(1.3)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
    return v;
}

}  // namespace

TEST(CostEval, PowerValues) {
    EXPECT_DOUBLE_EQ(eval_g(CostModel::power(2.0), 3.0), 9.0);
    EXPECT_EQ(eval_g(CostModel::power(2.0), 0.0), 0.0);
    EXPECT_DOUBLE_EQ(eval_g_prime(CostModel::power(2.0), 3.0), 6.0);
}

TEST(CostEval, PowerExpAtOne) {
    EXPECT_NEAR(eval_g(CostModel::power_exp(2.0), 1.0), 2.718281828459045, 1e-14);
}

TEST(CostEval, PowerExpSqrtDerivativeAtFour) {
    EXPECT_NEAR(eval_g_prime(CostModel::power_exp_sqrt(2.0), 4.0), 88.6686731871678, 1e-11);
}

TEST(CostEval, ZeroIsZeroForEveryFamily) {
    for (const auto& m : all_families()) {
        EXPECT_EQ(eval_g(m, 0.0), 0.0);
        EXPECT_EQ(eval_g_prime(m, 0.0), 0.0);
    }
}

TEST(CostEval, NegativeQualityRejected) {
    for (const auto& m : all_families()) {
        EXPECT_THROW(eval_g(m, -1.0), DomainError);
        EXPECT_THROW(eval_g_prime(m, -0.5), DomainError);
        EXPECT_THROW(log_ratio(m, 0.0), DomainError);
    }
}

TEST(CostEval, MatchesRawFormulas) {
    for (const auto& m : all_families()) {
        for (double w : log_grid(1e-3, 50.0, 40)) {
            EXPECT_NEAR(eval_g(m, w), oracle::g(m, w), 1e-12 * oracle::g(m, w)) << to_string(m.family) << " w=" << w;
        }
    }
}

TEST(CostEval, DerivativeMatchesFiniteDifference) {
    for (const auto& m : all_families()) {
        for (double w : log_grid(1e-3, 1e3, 61)) {
            if (m.family == CostFamily::PowerExp && w > 500) continue;  // g overflows near 710
            const double fd = oracle::g_prime(m, w);
            EXPECT_NEAR(eval_g_prime(m, w), fd, 1e-6 * fd) << to_string(m.family) << " w=" << w;
        }
    }
}

TEST(CostEval, OverflowIsInfinite) {
    EXPECT_TRUE(std::isinf(eval_g(CostModel::power_exp(2.0), 1e3)));
}

TEST(CostModelValidation, BetaMustExceedOne) {
    EXPECT_THROW(CostModel::power(1.0).validate(), PreconditionError);
    EXPECT_THROW(CostModel::power_exp_sqrt(1.0).validate(), PreconditionError);
    EXPECT_THROW(CostModel::power_log(2.0, 1.0).validate(), PreconditionError);
    EXPECT_NO_THROW(CostModel::power_log(1.01, 1.01).validate());
}

TEST(CostModelValidation, FamilyNamesRoundTrip) {
    for (const auto& m : all_families()) EXPECT_EQ(parse_cost_family(to_string(m.family)), m.family);
    EXPECT_FALSE(parse_cost_family("cubic").has_value());
}

TEST(LogRatio, Examples) {
    EXPECT_DOUBLE_EQ(log_ratio(CostModel::power(2.0), 4.0), 2.0);
    // w / (beta + w): the reciprocal of the log-derivative 1 + beta / w.
    EXPECT_NEAR(log_ratio(CostModel::power_exp(2.0), 3.0), 0.6, 1e-15);
    EXPECT_NEAR(log_ratio(CostModel::power_exp(2.0), 3.0), oracle::g(CostModel::power_exp(2.0), 3.0) /
                                                               oracle::g_prime(CostModel::power_exp(2.0), 3.0),
                1e-9);
}

TEST(LogRatio, BoundedByQualityAndVanishesAtZero) {
    for (const auto& m : all_families()) {
        for (double w : log_grid(1e-6, 1e4, 80)) EXPECT_LE(log_ratio(m, w), w);
        EXPECT_LT(log_ratio(m, 1e-8), 1e-7);
        for (double w : log_grid(1e-3, 10.0, 10)) {
            EXPECT_NEAR(log_ratio(m, w), oracle::g(m, w) / oracle::g_prime(m, w), 1e-6 * w);
        }
    }
}

TEST(LogRatio, StrictlyIncreasing) {
    for (const auto& m : all_families()) {
        double prev = 0.0;
        for (double w : log_grid(1e-4, 1e4, 200)) {
            const double r = log_ratio(m, w);
            EXPECT_GT(r, prev) << to_string(m.family) << " w=" << w;
            prev = r;
        }
    }
}

TEST(StrongCondition, Classification) {
    EXPECT_TRUE(satisfies_strong_condition(CostModel::power(2.0)));
    EXPECT_TRUE(satisfies_strong_condition(CostModel::power_exp_sqrt(2.0)));
    EXPECT_TRUE(satisfies_strong_condition(CostModel::power_log(1.5, 2.0)));
    EXPECT_FALSE(satisfies_strong_condition(CostModel::power_exp(2.0)));
}

TEST(OptimalQuality, PowerClosedForm) {
    EXPECT_DOUBLE_EQ(optimal_quality(CostModel::power(2.0), 0.5), 1.0);
    EXPECT_DOUBLE_EQ(optimal_quality(CostModel::power(2.0), 0.25), 2.0);
}

TEST(OptimalQuality, PowerExpFirstOrderCondition) {
    const CostModel m = CostModel::power_exp(2.0);
    const double w = optimal_quality(m, 0.1);
    EXPECT_NEAR(w, 1.0892131382676498, 1e-12);
    EXPECT_NEAR((2 * w + w * w) * std::exp(w), 10.0, 1e-9);
}

TEST(OptimalQuality, FirstOrderResidualAcrossFamilies) {
    for (const auto& m : all_families()) {
        for (double nu : log_grid(1e-6, 1e6, 49)) {
            const double w = optimal_quality(m, nu);
            EXPECT_NEAR(nu * eval_g_prime(m, w), 1.0, 1e-10) << to_string(m.family) << " nu=" << nu;
            EXPECT_NEAR(w, oracle::w_star(m, nu), 1e-9 * w) << to_string(m.family) << " nu=" << nu;
        }
    }
}

TEST(OptimalQuality, StrictlyDecreasing) {
    for (const auto& m : all_families()) {
        double prev = kInfiniteCost;
        for (double nu : log_grid(1e-4, 1e4, 120)) {
            const double w = optimal_quality(m, nu);
            EXPECT_LT(w, prev);
            prev = w;
        }
    }
}

TEST(OptimalQuality, RejectsNonPositiveCost) {
    EXPECT_THROW(optimal_quality(CostModel::power(2.0), 0.0), DomainError);
    EXPECT_THROW(optimal_quality(CostModel::power_exp(2.0), -1.0), DomainError);
}

TEST(DirectUtility, PowerValues) {
    EXPECT_DOUBLE_EQ(max_direct_utility(CostModel::power(2.0), 0.5), 0.5);
    EXPECT_DOUBLE_EQ(max_direct_utility(CostModel::power(2.0), 1.0), 0.25);
}

TEST(DirectUtility, MatchesGoldenSection) {
    for (const auto& m : all_families()) {
        for (double nu : log_grid(1e-3, 1e3, 13)) {
            const double u = max_direct_utility(m, nu);
            EXPECT_GE(u, 0.0);
            EXPECT_NEAR(u, oracle::direct_utility(m, nu), 1e-9 * std::max(1.0, u));
        }
    }
}

TEST(DirectUtility, EnvelopeDerivative) {
    for (const auto& m : all_families()) {
        for (double nu : log_grid(1e-3, 1e2, 16)) {
            const double h = 1e-6 * nu;
            const double fd = (max_direct_utility(m, nu + h) - max_direct_utility(m, nu - h)) / (2 * h);
            const double expected = -eval_g(m, optimal_quality(m, nu));
            EXPECT_NEAR(fd, expected, 1e-5 * std::abs(expected)) << to_string(m.family) << " nu=" << nu;
        }
    }
}

TEST(EffectiveCostTest, ManualWinsWhenCheaper) {
    MarketParams p;
    p.supply_cost = 2.0;
    p.manual_cost = 1.0;
    const EffectiveCost e = competitive_cost(p);
    EXPECT_EQ(e.nu, 1.0);
    EXPECT_EQ(e.source, CostSource::Manual);
}

TEST(EffectiveCostTest, SuppliersWinTiesLowestIndexFirst) {
    MarketParams p;
    p.human_cost = 0.5;
    p.manual_cost = 1.5;
    const std::vector<double> prices{1.2, 1.0, 1.0};
    const EffectiveCost e = effective_cost(p, prices);
    EXPECT_EQ(e.source, CostSource::Supplier);
    EXPECT_EQ(e.supplier, 1u);
    EXPECT_DOUBLE_EQ(e.nu, 1.5);
}

TEST(EffectiveCostTest, InfiniteManualCostWithoutSuppliersRejected) {
    MarketParams p;
    p.manual_cost = kInfiniteCost;
    EXPECT_THROW(effective_cost(p, {}), DomainError);
}

TEST(MarketParamsValidation, Ranges) {
    MarketParams p;
    p.consumers = 1;
    EXPECT_THROW(p.validate(), PreconditionError);
    p = {};
    p.alpha = 0.0;
    EXPECT_THROW(p.validate(), PreconditionError);
    p = {};
    p.manual_cost = kInfiniteCost;
    EXPECT_NO_THROW(p.validate());
}

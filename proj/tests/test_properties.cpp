#include "intermed/extensions.hpp"
#include "property_checks.hpp"

#include <gtest/gtest.h>

using namespace intermed;

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size() && i < 10; ++i) s += v[i] + "\n";
    return s;
}

}  // namespace

TEST(Properties, EnvelopeDerivative) {
    const auto bad = props::envelope_failures(props::draws(600, 11));
    EXPECT_TRUE(bad.empty()) << join(bad);
}

TEST(Properties, LogRatioIncreasing) {
    const auto bad = props::log_ratio_failures(props::draws(600, 12));
    EXPECT_TRUE(bad.empty()) << join(bad);
}

TEST(Properties, QualityUtilityWelfareDecreasing) {
    const auto bad = props::monotonicity_failures(props::draws(600, 13));
    EXPECT_TRUE(bad.empty()) << join(bad);
}

TEST(Properties, JumpDirections) {
    const auto bad = props::jump_failures(props::draws(600, 14));
    EXPECT_TRUE(bad.empty()) << join(bad);
}

TEST(Properties, WelfareBelowPlannerAndAboveNoIntermediaryInBand) {
    for (const auto& d : props::draws(500, 15, true)) {
        const MarketParams p = d.params();
        const Thresholds t = compute_thresholds(d.model, p);
        ASSERT_TRUE(t.t_lower && t.t_upper) << d.describe();
        for (double nu : props::log_grid(*t.t_lower / 5.0, *t.t_upper * 5.0, 25)) {
            const double sw = social_welfare(d.model, p, nu);
            const double with = planner_welfare(d.model, p, nu, true);
            EXPECT_LE(sw, with * (1.0 + 1e-12)) << d.describe() << " nu=" << nu;
            if (nu > *t.t_lower && nu < *t.t_upper) {
                EXPECT_GT(sw, planner_welfare(d.model, p, nu, false)) << d.describe() << " nu=" << nu;
            }
        }
    }
}

TEST(Properties, InteriorMinimumEqualsAlpha) {
    for (const auto& d : props::draws(500, 16, true)) {
        const MarginMinimum m = interior_minimizer(d.model, d.alpha);
        ASSERT_TRUE(m.interior) << d.describe();
        const double v = disintermediation_margin(d.model, d.alpha, d.consumers, m.nu) + d.alpha * d.consumers;
        EXPECT_NEAR(v, d.alpha, 1e-9 * d.alpha * d.consumers) << d.describe();
    }
}

TEST(Properties, RegimeConsistentWithMarginSign) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> log_nu(std::log(1e-5), std::log(1e3));
    for (const auto& d : props::draws(1000, 18)) {
        const Thresholds t = compute_thresholds(d.model, d.alpha, d.consumers);
        const double nu = std::exp(log_nu(rng));
        const double phi = disintermediation_margin(d.model, d.alpha, d.consumers, nu);
        if (std::abs(phi) < 1e-9 * d.alpha * d.consumers) continue;
        EXPECT_EQ(t.contains(nu), phi < 0.0) << d.describe() << " nu=" << nu;
    }
}

TEST(Properties, MarginalCostBandShrinksInGamma) {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> beta(1.2, 4.0), alpha(0.2, 5.0);
    std::uniform_int_distribution<int> consumers(3, 32);
    for (int i = 0; i < 200; ++i) {
        const double b = beta(rng), a = alpha(rng);
        const int c = consumers(rng);
        double prev = kInfiniteCost;
        for (double gamma : {0.0, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            const Thresholds t = marginal_cost_thresholds(b, a, c, gamma);
            const double width = *t.t_upper - *t.t_lower;
            EXPECT_LT(width, prev) << b << " " << a << " " << c << " gamma=" << gamma;
            prev = width;
        }
    }
}

TEST(Properties, MonopolistPriceMapShape) {
    for (double beta : {1.5, 2.0, 3.0}) {
        const MonopolistThresholds t = monopolist_thresholds(beta, 1.0, 8.0);
        double prev_price = 0.0;
        for (double rho : props::log_grid(t.t_lower / beta / 10.0, t.t_upper * 10.0, 400)) {
            const MonopolistSolution s = monopolist_price(beta, 1.0, 8.0, rho);
            EXPECT_GE(s.price, prev_price) << beta << " rho=" << rho;
            EXPECT_GT(s.price, rho);
            prev_price = s.price;
        }
    }
}

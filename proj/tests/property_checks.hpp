#pragma once

// Randomized invariant checks shared by the property tests and the acceptance binary.
// Each check returns the list of failing draws as readable strings.

#include "intermed/core.hpp"
#include "intermed/equilibrium.hpp"
#include "intermed/metrics.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace props {

struct Draw {
    intermed::CostModel model;
    double alpha = 1.0;
    int consumers = 4;

    intermed::MarketParams params() const {
        intermed::MarketParams p;
        p.alpha = alpha;
        p.consumers = consumers;
        p.manual_cost = intermed::kInfiniteCost;
        return p;
    }

    std::string describe() const {
        std::ostringstream s;
        s.precision(17);
        s << intermed::to_string(model.family) << " beta=" << model.beta << " eta=" << model.eta << " alpha=" << alpha
          << " C=" << consumers;
        return s.str();
    }
};

inline std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

inline std::vector<Draw> draws(std::size_t n, std::uint32_t seed, bool strong_only = false) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> beta(1.2, 4.0), eta(1.1, 3.0), log_alpha(std::log(0.2), std::log(5.0));
    std::uniform_int_distribution<int> consumers(2, 32), family(0, strong_only ? 2 : 3);
    std::vector<Draw> out;
    for (std::size_t i = 0; i < n; ++i) {
        Draw d;
        switch (family(rng)) {
            case 0: d.model = intermed::CostModel::power(beta(rng)); break;
            case 1: d.model = intermed::CostModel::power_exp_sqrt(beta(rng)); break;
            case 2: d.model = intermed::CostModel::power_log(beta(rng), eta(rng)); break;
            default: d.model = intermed::CostModel::power_exp(beta(rng)); break;
        }
        d.alpha = std::exp(log_alpha(rng));
        d.consumers = consumers(rng);
        out.push_back(d);
    }
    return out;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return v;
}

// Range of nu worth probing for a draw: a decade beyond each threshold. Without a lower threshold
// (PowerExp) the range reaches three decades below the upper one.
inline std::pair<double, double> probe_range(const Draw& d) {
    const intermed::Thresholds t = intermed::compute_thresholds(d.model, d.alpha, d.consumers);
    const double hi = t.t_upper ? *t.t_upper * 10.0 : 1e6;
    const double lo = t.t_lower ? *t.t_lower / 10.0 : std::min(1e-6, hi * 1e-4);
    return {lo, hi};
}

// dU/dnu = -g(w*(nu)) against a central difference with relative tolerance 1e-5.
inline std::vector<std::string> envelope_failures(const std::vector<Draw>& ds) {
    std::vector<std::string> bad;
    for (const auto& d : ds) {
        const auto [lo, hi] = probe_range(d);
        for (double nu : log_grid(lo, hi, 7)) {
            const double h = 1e-5 * nu;
            const double fd = (intermed::max_direct_utility(d.model, nu + h) -
                               intermed::max_direct_utility(d.model, nu - h)) / (2.0 * h);
            const double exact = -intermed::eval_g(d.model, intermed::optimal_quality(d.model, nu));
            if (!(std::abs(fd - exact) <= 1e-5 * std::abs(exact))) {
                bad.push_back(d.describe() + " nu=" + num(nu));
                break;
            }
        }
    }
    return bad;
}

// g/g' strictly increasing in w and bounded by w.
inline std::vector<std::string> log_ratio_failures(const std::vector<Draw>& ds) {
    std::vector<std::string> bad;
    for (const auto& d : ds) {
        double prev = 0.0;
        for (double w : log_grid(1e-4, 1e4, 60)) {
            const double r = intermed::log_ratio(d.model, w);
            if (!(r > prev) || !(r <= w)) {
                bad.push_back(d.describe() + " w=" + num(w));
                break;
            }
            prev = r;
        }
    }
    return bad;
}

// Quality, consumer utility and social welfare non-increasing along a nu grid spanning both regimes.
inline std::vector<std::string> monotonicity_failures(const std::vector<Draw>& ds) {
    std::vector<std::string> bad;
    for (const auto& d : ds) {
        const intermed::MarketParams p = d.params();
        const auto [lo, hi] = probe_range(d);
        double q_prev = intermed::kInfiniteCost, u_prev = q_prev, sw_prev = q_prev;
        for (double nu : log_grid(lo, hi, 80)) {
            const double q = intermed::content_quality(d.model, p, nu);
            const double u = intermed::consumer_utility(d.model, p, nu);
            const double sw = intermed::social_welfare(d.model, p, nu);
            const double slack = 1e-12 * std::max(1.0, std::abs(sw_prev));
            if (!(q < q_prev) || !(u < u_prev) || !(sw <= sw_prev + slack)) {
                bad.push_back(d.describe() + " nu=" + num(nu));
                break;
            }
            q_prev = q;
            u_prev = u;
            sw_prev = sw;
        }
    }
    return bad;
}

// At T_L direct quality exceeds the intermediated quality; at T_U it falls short.
inline std::vector<std::string> jump_failures(const std::vector<Draw>& ds) {
    std::vector<std::string> bad;
    for (const auto& d : ds) {
        const intermed::Thresholds t = intermed::compute_thresholds(d.model, d.alpha, d.consumers);
        if (t.t_lower) {
            const double nu = *t.t_lower;
            if (!(intermed::optimal_quality(d.model, nu) > d.alpha + intermed::max_direct_utility(d.model, nu))) {
                bad.push_back(d.describe() + " at T_L");
            }
        }
        if (t.t_upper) {
            const double nu = *t.t_upper;
            if (!(intermed::optimal_quality(d.model, nu) < d.alpha + intermed::max_direct_utility(d.model, nu))) {
                bad.push_back(d.describe() + " at T_U");
            }
        }
    }
    return bad;
}

}  // namespace props

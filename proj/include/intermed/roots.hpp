#pragma once

// Scalar bracketing utilities shared by the equilibrium and extension solvers.

#include <cmath>
#include <limits>
#include <optional>

namespace intermed::roots {

struct BisectOptions {
    double x_rel_tol = 1e-14;   ///< stop once hi - lo <= x_rel_tol * |mid|
    double f_abs_tol = 0.0;     ///< optional early exit on |f| <= f_abs_tol
    int max_iter = 400;
    bool geometric = false;     ///< bisect in log-space (requires 0 < lo < hi)
};

struct RootResult {
    double root = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection on [lo, hi] for a function with f(lo) and f(hi) of opposite sign (zero allowed).
/// Returns the endpoint of the final bracket with the smaller |f|.
template <class F>
RootResult bisect(F&& f, double lo, double hi, const BisectOptions& opts = {}) {
    RootResult r;
    double flo = f(lo);
    double fhi = f(hi);
    r.lo = lo;
    r.hi = hi;
    if (flo == 0.0) {
        r.root = lo;
        r.residual = 0.0;
        r.converged = true;
        return r;
    }
    if (fhi == 0.0) {
        r.root = hi;
        r.residual = 0.0;
        r.converged = true;
        return r;
    }
    if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
        r.root = std::abs(flo) < std::abs(fhi) ? lo : hi;
        r.residual = std::min(std::abs(flo), std::abs(fhi));
        return r;
    }
    for (r.iterations = 0; r.iterations < opts.max_iter; ++r.iterations) {
        const double mid = opts.geometric ? std::sqrt(lo) * std::sqrt(hi) : lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) {
            r.converged = true;
            break;
        }
        const double fmid = f(mid);
        if (fmid == 0.0) {
            lo = hi = mid;
            flo = fhi = 0.0;
            r.converged = true;
            break;
        }
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        const bool narrow = (hi - lo) <= opts.x_rel_tol * std::abs(lo + 0.5 * (hi - lo));
        const bool flat = opts.f_abs_tol > 0.0 && std::min(std::abs(flo), std::abs(fhi)) <= opts.f_abs_tol;
        if (narrow || flat) {
            r.converged = true;
            break;
        }
    }
    r.lo = lo;
    r.hi = hi;
    if (std::abs(flo) <= std::abs(fhi)) {
        r.root = lo;
        r.residual = std::abs(flo);
    } else {
        r.root = hi;
        r.residual = std::abs(fhi);
    }
    return r;
}

/// Multiply `start` by `factor` until `pred(x)` holds or x passes `limit`.
/// Works in both directions: factor > 1 grows toward limit, factor < 1 shrinks toward it.
template <class Pred>
std::optional<double> expand_until(Pred&& pred, double start, double factor, double limit) {
    double x = start;
    for (int i = 0; i < 4096; ++i) {
        x *= factor;
        if (factor > 1.0 ? x > limit : x < limit) {
            return std::nullopt;
        }
        if (pred(x)) {
            return x;
        }
    }
    return std::nullopt;
}

}  // namespace intermed::roots

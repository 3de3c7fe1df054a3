#pragma once

// Bracketed scalar root solving. The Illinois variant of regula falsi is used
// everywhere a monotone objective has to be inverted (expectiles, calibration
// levels, quantile fallbacks).

#include <cmath>
#include <stdexcept>

namespace varmetrics {

struct BracketSolveOptions {
    double x_tol = 1e-13;     // absolute tolerance on the bracket width
    double f_tol = 0.0;       // stop when |f| <= f_tol (0 disables)
    int max_iter = 200;
};

/// Root of f on [lo, hi]; f(lo) and f(hi) must have opposite (or zero) signs.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, BracketSolveOptions opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::domain_error("solve_bracketed: no sign change over the bracket");

    double x = lo, fx = flo;
    for (int it = 0; it < opt.max_iter; ++it) {
        // Illinois step: secant through (lo, flo), (hi, fhi), halving the
        // retained endpoint's value when the same side is kept twice.
        x = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(x > std::min(lo, hi) && x < std::max(lo, hi)))
            x = 0.5 * (lo + hi);
        fx = f(x);
        if (fx == 0.0 || std::fabs(hi - lo) <= opt.x_tol * (1.0 + std::fabs(x)))
            return x;
        if (opt.f_tol > 0.0 && std::fabs(fx) <= opt.f_tol)
            return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x; fhi = fx;
            flo *= 0.5;
        } else {
            lo = hi; flo = fhi;
            hi = x; fhi = fx;
        }
    }
    return x;
}

/// Expand [lo, hi] geometrically until f changes sign across it.
/// Returns false if no sign change is found within max_steps expansions.
template <class F>
bool expand_bracket(F&& f, double& lo, double& hi, int max_steps = 60) {
    double flo = f(lo);
    double fhi = f(hi);
    double width = hi - lo;
    for (int i = 0; i < max_steps; ++i) {
        if ((flo > 0.0) != (fhi > 0.0) || flo == 0.0 || fhi == 0.0) return true;
        width *= 2.0;
        lo -= width;
        hi += width;
        flo = f(lo);
        fhi = f(hi);
    }
    return (flo > 0.0) != (fhi > 0.0);
}

} // namespace varmetrics

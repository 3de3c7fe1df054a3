#pragma once

// Level matching: given p, find q and r so that the inter-ES difference at q
// and the inter-expectile difference at r equal the inter-quantile difference
// at p. Both level maps are nondecreasing, so plain bisection is reliable;
// brackets are validated up front rather than clamped.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "distributions.hpp"
#include "variability.hpp"

namespace varmetrics {

struct LevelTriple {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

namespace detail {

/// Bisection for f nondecreasing with f(x) = target somewhere in [lo, hi].
template <class F>
double bisect_level(F&& f, double lo, double hi, double target, const char* what) {
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo <= target && target <= fhi))
        throw std::domain_error(std::string(what) +
                                ": target variability is outside the attainable range");
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

inline LevelTriple match_levels(const ParametricDistribution& d, double p) {
    if (!(p > 0.5 && p < 1.0))
        throw std::domain_error("match_levels: p must lie in (1/2,1)");
    if (!d.has_finite_mean())
        throw std::domain_error("match_levels: requires a law with finite mean");
    const double target = delta_q(d, p);

    const double eps = 1e-9;
    const double q = detail::bisect_level([&](double x) { return delta_es(d, x); }, eps,
                                          1.0 - eps, target, "match_levels[q]");
    const double r = detail::bisect_level([&](double x) { return delta_ex(d, x); },
                                          0.5 + eps, 1.0 - eps, target, "match_levels[r]");

    const double tol = 1e-9 * (1.0 + target);
    if (std::fabs(delta_es(d, q) - target) > tol ||
        std::fabs(delta_ex(d, r) - target) > tol)
        throw std::runtime_error("match_levels: solver residual above tolerance");
    return {p, q, r};
}

inline std::vector<LevelTriple> calibration_curve(const ParametricDistribution& d,
                                                  std::span<const double> p_grid) {
    std::vector<LevelTriple> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) out.push_back(match_levels(d, p));
    return out;
}

/// The benchmark triples equalizing the three measures under normality.
inline std::array<LevelTriple, 3> rule_of_thumb() {
    return {LevelTriple{0.9, 0.75, 0.97}, LevelTriple{0.95, 0.875, 0.99},
            LevelTriple{0.99, 0.97, 0.999}};
}

inline LevelTriple match_levels(const AnyDistribution& d, double p) {
    if (const auto* pd = std::get_if<ParametricDistribution>(&d)) return match_levels(*pd, p);
    throw std::domain_error("match_levels: requires a continuous parametric law");
}

inline std::vector<LevelTriple> calibration_curve(const AnyDistribution& d,
                                                  std::span<const double> p_grid) {
    if (const auto* pd = std::get_if<ParametricDistribution>(&d))
        return calibration_curve(*pd, p_grid);
    throw std::domain_error("calibration_curve: requires a continuous parametric law");
}

} // namespace varmetrics

#pragma once

// Variability measures built from the risk measures: the inter-quantile,
// inter-ES and inter-expectile differences, the range, the classic deviation
// measures (variance, standard deviation, MAD, MMD, Gini deviation, relative
// deviation, Gini coefficient), and the mixture-of-inter-ES evaluator.
//
// Conventions for values outside the natural domain: measures take values in
// [0, +inf], so missing moments degrade to +inf. delta_q accepts p in [1/2,1]
// and delta_es p in (0,1], both routing p = 1 to the range. delta_ex is
// defined here on all of (0,1); only p > 1/2 is a variability measure proper
// (p < 1/2 gives the antisymmetric negative), and it is +inf off L^1.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "distributions.hpp"
#include "quadrature.hpp"
#include "risk_measures.hpp"

namespace varmetrics {

// ---------------------------------------------------------------------------
// range

inline double range_measure(const ParametricDistribution& d) {
    return d.support_upper() - d.support_lower();
}

inline double range_measure(const DiscreteDistribution& d) {
    return d.max() - d.min();
}

// ---------------------------------------------------------------------------
// the three interdifferences

namespace detail {

inline void check_delta_q_level(double p) {
    if (!(p >= 0.5 && p <= 1.0))
        throw std::domain_error("delta_q: p must lie in [1/2,1]");
}

inline void check_delta_es_level(double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("delta_es: p must lie in (0,1]");
}

inline void check_delta_ex_level(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("delta_ex: p must lie in (0,1)");
}

} // namespace detail

template <class Dist>
double delta_q(const Dist& d, double p) {
    detail::check_delta_q_level(p);
    if (p == 1.0) return range_measure(d);
    return quantile_right(d, p) - quantile_left(d, 1.0 - p);
}

template <class Dist>
double delta_es(const Dist& d, double p) {
    detail::check_delta_es_level(p);
    if (p == 1.0) return range_measure(d);
    return es(d, p) - es_left(d, 1.0 - p);
}

inline double delta_ex(const ParametricDistribution& d, double p) {
    detail::check_delta_ex_level(p);
    if (!d.has_finite_mean()) return p >= 0.5 ? infinity : -infinity;
    if (p == 0.5) return 0.0;
    return expectile(d, p) - expectile(d, 1.0 - p);
}

inline double delta_ex(const DiscreteDistribution& d, double p) {
    detail::check_delta_ex_level(p);
    if (p == 0.5) return 0.0;
    return expectile(d, p) - expectile(d, 1.0 - p);
}

// ---------------------------------------------------------------------------
// classic deviation measures

inline double variance(const ParametricDistribution& d) { return d.variance(); }

inline double variance(const DiscreteDistribution& d) {
    const double m = d.mean();
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double c = d.support()[i] - m;
        acc += d.probs()[i] * c * c;
    }
    return acc;
}

template <class Dist>
double std_dev(const Dist& d) {
    return std::sqrt(variance(d));
}

/// Mean absolute deviation E|X - E[X]|; +inf off L^1.
inline double mad(const ParametricDistribution& d) {
    if (!d.has_finite_mean()) return infinity;
    return 2.0 * d.upper_partial_moment(d.mean());
}

inline double mad(const DiscreteDistribution& d) {
    const double m = d.mean();
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        acc += d.probs()[i] * std::fabs(d.support()[i] - m);
    return acc;
}

/// Mean median deviation min_x E|X - x| = E|X - median|; +inf off L^1.
inline double mmd(const ParametricDistribution& d) {
    if (!d.has_finite_mean()) return infinity;
    const double med = d.quantile(0.5);
    return 2.0 * d.upper_partial_moment(med) - d.mean() + med;
}

inline double mmd(const DiscreteDistribution& d) {
    const double med = quantile_left(d, 0.5);
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        acc += d.probs()[i] * std::fabs(d.support()[i] - med);
    return acc;
}

/// Gini deviation (1/2) E|X1 - X2| = int_0^1 Q(u)(2u-1) du; +inf off L^1.
inline double gini_d(const ParametricDistribution& d) {
    if (!d.has_finite_mean()) return infinity;
    double core = 0.0;
    switch (d.family()) {
        case Family::normal:
            core = 1.0 / std::sqrt(pi_const);
            break;
        case Family::exponential:
            core = 0.5;
            break;
        case Family::pareto: {
            const double a = d.shape();
            core = a / ((a - 1.0) * (2.0 * a - 1.0));
            break;
        }
        case Family::student_t: {
            const double nu = d.shape();
            // lower half in u, upper half in the tail coordinate y = 1-u,
            // where doubles keep full resolution against the blowup
            auto f_lo = [nu](double u) {
                return student_t_quantile(u, nu) * (2.0 * u - 1.0);
            };
            auto f_hi = [nu](double y) {
                return -student_t_quantile(y, nu) * (1.0 - 2.0 * y);
            };
            core = integrate_clustered(f_lo, 0.0, 0.5, 5e-12).value +
                   integrate_clustered(f_hi, 0.0, 0.5, 5e-12).value;
            break;
        }
    }
    return d.scale() * core;
}

inline double gini_d(const DiscreteDistribution& d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j)
            acc += d.probs()[i] * d.probs()[j] *
                   std::fabs(d.support()[i] - d.support()[j]);
    return 0.5 * acc;
}

namespace detail {

template <class Dist>
void check_nonnegative_support(const Dist& d, const char* who) {
    bool ok;
    if constexpr (std::is_same_v<Dist, ParametricDistribution>) {
        ok = d.support_lower() >= 0.0;
    } else {
        ok = d.min() >= 0.0;
    }
    if (!ok)
        throw std::domain_error(std::string(who) +
                                ": requires a distribution supported on [0,inf)");
}

template <class Dist>
double positive_mean(const Dist& d, const char* who) {
    double m;
    if constexpr (std::is_same_v<Dist, ParametricDistribution>) {
        m = d.has_finite_mean() ? d.mean() : infinity;
    } else {
        m = d.mean();
    }
    if (!(m > 0.0))
        throw std::domain_error(std::string(who) + ": requires a strictly positive mean");
    return m;
}

} // namespace detail

/// Coefficient of variation SD(X)/E[X] for laws on [0,inf) with positive mean.
template <class Dist>
double relative_deviation(const Dist& d) {
    detail::check_nonnegative_support(d, "relative_deviation");
    const double m = detail::positive_mean(d, "relative_deviation");
    if (!std::isfinite(m)) return infinity;
    return std_dev(d) / m;
}

/// Gini coefficient Gini-D(X)/E[X] for laws on [0,inf) with positive mean.
template <class Dist>
double gini_coefficient(const Dist& d) {
    detail::check_nonnegative_support(d, "gini_coefficient");
    const double m = detail::positive_mean(d, "gini_coefficient");
    if (!std::isfinite(m)) return infinity;
    return gini_d(d) / m;
}

// ---------------------------------------------------------------------------
// mixture of inter-ES differences

/// Finite Borel measure mu on (0,1] given by atoms and/or a density. The
/// induced measure is nu(X) = int Delta^ES_p(X) dmu(p); an atom at p = 1
/// contributes the range.
struct MixtureMeasure {
    std::vector<std::pair<double, double>> atoms;     // (location in (0,1], weight > 0)
    std::function<double(double)> density;            // optional weight function on (0,1)
    double quad_tol = 1e-8;

    void validate() const {
        if (atoms.empty() && !density)
            throw std::invalid_argument("MixtureMeasure: needs atoms or a density");
        for (const auto& [p, w] : atoms) {
            if (!(p > 0.0 && p <= 1.0))
                throw std::invalid_argument("MixtureMeasure: atom locations must lie in (0,1]");
            if (!(w > 0.0))
                throw std::invalid_argument("MixtureMeasure: atom weights must be positive");
        }
        if (!(quad_tol > 0.0))
            throw std::invalid_argument("MixtureMeasure: quadrature tolerance must be positive");
    }
};

namespace detail {

inline double mixture_density_part(const ParametricDistribution& d,
                                   const MixtureMeasure& mu) {
    auto f = [&](double p) { return mu.density(p) * delta_es(d, p); };
    return integrate_clustered(f, 0.0, 1.0, mu.quad_tol).value;
}

/// delta_es of an atomic law is piecewise smooth in p with kinks where p or
/// 1-p crosses a cumulative weight; integrating each piece separately keeps
/// the quadrature exact-grade.
inline double mixture_density_part(const DiscreteDistribution& d,
                                   const MixtureMeasure& mu) {
    std::vector<double> cuts{0.0, 1.0};
    for (double c : d.cumulative()) {
        if (c > 0.0 && c < 1.0) {
            cuts.push_back(c);
            cuts.push_back(1.0 - c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto f = [&](double p) { return mu.density(p) * delta_es(d, p); };
    const double seg_tol = mu.quad_tol / static_cast<double>(cuts.size());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += integrate(f, cuts[i], cuts[i + 1], seg_tol).value;
    return acc;
}

} // namespace detail

template <class Dist>
double mixture_es(const Dist& d, const MixtureMeasure& mu) {
    mu.validate();
    double acc = 0.0;
    for (const auto& [p, w] : mu.atoms) acc += w * delta_es(d, p);
    if (mu.density) acc += detail::mixture_density_part(d, mu);
    return acc;
}

// ---------------------------------------------------------------------------
// symmetric-law identities

/// Residuals of the identities valid for X symmetric about 0:
///   Delta^Q_p  = -2 Q^-_{1-p},  Delta^ES_p = -2 ES^-_{1-p},  Delta^ex_p = 2 ex_p.
/// The caller asserts symmetry; the residuals quantify it.
struct SymmetryResiduals {
    double quantile_residual;
    double es_residual;
    double expectile_residual;
};

template <class Dist>
SymmetryResiduals symmetric_identities_check(const Dist& d, double p) {
    SymmetryResiduals r{};
    r.quantile_residual = std::fabs(delta_q(d, p) + 2.0 * quantile_left(d, 1.0 - p));
    r.es_residual = std::fabs(delta_es(d, p) + 2.0 * es_left(d, 1.0 - p));
    r.expectile_residual = std::fabs(delta_ex(d, p) - 2.0 * expectile(d, p));
    return r;
}

// ---------------------------------------------------------------------------
// variant dispatch

inline double range_measure(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return range_measure(x); }, d);
}
inline double delta_q(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return delta_q(x, p); }, d);
}
inline double delta_es(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return delta_es(x, p); }, d);
}
inline double delta_ex(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return delta_ex(x, p); }, d);
}
inline double variance(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return variance(x); }, d);
}
inline double std_dev(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return std_dev(x); }, d);
}
inline double mad(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return mad(x); }, d);
}
inline double mmd(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return mmd(x); }, d);
}
inline double gini_d(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return gini_d(x); }, d);
}
inline double relative_deviation(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return relative_deviation(x); }, d);
}
inline double gini_coefficient(const AnyDistribution& d) {
    return std::visit([](const auto& x) { return gini_coefficient(x); }, d);
}
inline double mixture_es(const AnyDistribution& d, const MixtureMeasure& mu) {
    return std::visit([&mu](const auto& x) { return mixture_es(x, mu); }, d);
}

} // namespace varmetrics

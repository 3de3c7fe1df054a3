#pragma once

// Risk measures on distributions: the right/left quantile pair, upper and
// lower tail averages, and expectiles. Tail averages follow the sign
// convention of an upper integral, so es is the mean of the worst (largest)
// outcomes. Values off the natural integrability domain degrade to +/-inf
// rather than throwing; expectiles require a finite mean and throw otherwise.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>

#include "distributions.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace varmetrics {

namespace detail {

inline void check_open_unit(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error(std::string(who) + ": p must lie in (0,1)");
}

} // namespace detail

// ---------------------------------------------------------------------------
// parametric laws

inline double quantile_right(const ParametricDistribution& d, double p) {
    detail::check_open_unit(p, "quantile_right");
    return d.quantile(p);
}

/// Left quantile; coincides with the right quantile for these laws because
/// their cdfs are continuous and strictly increasing on the support.
inline double quantile_left(const ParametricDistribution& d, double p) {
    detail::check_open_unit(p, "quantile_left");
    return d.quantile(p);
}

/// Upper tail average (1/(1-p)) int_p^1 Q_r dr for p in [0,1).
/// +inf when the upper tail is not integrable. Student-t integrates the
/// quantile transform with the clustered rule; the other families have
/// closed forms.
inline double es(const ParametricDistribution& d, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("es: p must lie in [0,1)");
    if (!d.has_finite_mean()) return infinity;
    if (p == 0.0) return d.mean();
    double core = 0.0;
    switch (d.family()) {
        case Family::normal:
            core = normal_pdf(normal_quantile(p)) / (1.0 - p);
            break;
        case Family::exponential:
            core = 1.0 - std::log(1.0 - p);
            break;
        case Family::pareto: {
            const double a = d.shape();
            core = a / (a - 1.0) * std::pow(1.0 - p, -1.0 / a);
            break;
        }
        case Family::student_t: {
            const double nu = d.shape();
            // integrate in the tail coordinate y = 1-r: doubles thin out
            // near 1 and the quantile turns into a staircase there, while
            // near 0 they keep full resolution
            auto q_up = [nu](double y) { return -student_t_quantile(y, nu); };
            core = integrate_clustered(q_up, 0.0, 1.0 - p, 1e-11).value / (1.0 - p);
            break;
        }
    }
    return d.shift() + d.scale() * core;
}

/// Lower tail average (1/p) int_0^p Q_r dr for p in (0,1].
/// -inf when the lower tail is not integrable.
inline double es_left(const ParametricDistribution& d, double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("es_left: p must lie in (0,1]");
    switch (d.family()) {
        case Family::normal:
            if (p == 1.0) return d.mean();
            return d.shift() - d.scale() * normal_pdf(normal_quantile(1.0 - p)) / p;
        case Family::student_t: {
            if (d.shape() <= 1.0) return -infinity;
            if (p == 1.0) return d.mean();
            // symmetric core: ES^-_p(core) = -ES_{1-p}(core)
            const double upper = (es(d, 1.0 - p) - d.shift()) / d.scale();
            return d.shift() - d.scale() * upper;
        }
        case Family::exponential: {
            if (p == 1.0) return d.mean();
            // mean identity: E[X] = p ES^-_p + (1-p) ES_p
            return (d.mean() - (1.0 - p) * es(d, p)) / p;
        }
        case Family::pareto: {
            const double a = d.shape();
            double core;
            if (p == 1.0 && a <= 1.0) return infinity;  // equals the (infinite) mean
            if (a == 1.0) {
                core = -std::log(1.0 - p) / p;
            } else {
                core = (1.0 - std::pow(1.0 - p, 1.0 - 1.0 / a)) / ((1.0 - 1.0 / a) * p);
            }
            return d.shift() + d.scale() * core;
        }
    }
    return 0.0;
}

/// Expectile: unique root of psi(x) = p E[(X-x)_+] - (1-p) E[(x-X)_+].
/// Defined only for laws with a finite mean.
inline double expectile(const ParametricDistribution& d, double p) {
    detail::check_open_unit(p, "expectile");
    if (!d.has_finite_mean())
        throw std::domain_error("expectile: distribution has no finite mean");
    const double mean = d.mean();
    if (p == 0.5) return mean;
    const double abs_mean = 2.0 * d.upper_partial_moment(0.0) - mean;
    auto psi = [&](double x) {
        return (2.0 * p - 1.0) * d.upper_partial_moment(x) + (1.0 - p) * (mean - x);
    };
    double lo = d.quantile(1e-6);
    double hi = d.quantile(1.0 - 1e-6);
    if (!expand_bracket(psi, lo, hi))
        throw std::runtime_error("expectile: failed to bracket the root");
    BracketSolveOptions opt;
    opt.x_tol = 1e-13 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    opt.f_tol = 1e-13 * (1.0 + abs_mean);
    return solve_bracketed(psi, lo, hi, opt);
}

// ---------------------------------------------------------------------------
// discrete laws

/// Right quantile: smallest atom whose cumulative weight exceeds p.
inline double quantile_right(const DiscreteDistribution& d, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("quantile_right: p must lie in [0,1)");
    const auto& cum = d.cumulative();
    for (std::size_t i = 0; i < cum.size(); ++i)
        if (cum[i] > p) return d.support()[i];
    return d.support().back();
}

/// Left quantile: smallest atom whose cumulative weight reaches p.
inline double quantile_left(const DiscreteDistribution& d, double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("quantile_left: p must lie in (0,1]");
    const auto& cum = d.cumulative();
    for (std::size_t i = 0; i < cum.size(); ++i)
        if (cum[i] >= p) return d.support()[i];
    return d.support().back();
}

/// Upper tail average of the step quantile function; exact for atomic laws.
inline double es(const DiscreteDistribution& d, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("es: p must lie in [0,1)");
    if (p == 0.0) return d.mean();
    const auto& cum = d.cumulative();
    const auto& sup = d.support();
    const auto& w = d.probs();
    std::size_t k = cum.size() - 1;
    for (std::size_t i = 0; i < cum.size(); ++i) {
        if (cum[i] > p) {
            k = i;
            break;
        }
    }
    double acc = (cum[k] - p) * sup[k];
    for (std::size_t j = k + 1; j < sup.size(); ++j) acc += w[j] * sup[j];
    return acc / (1.0 - p);
}

/// Lower tail average of the step quantile function; exact for atomic laws.
inline double es_left(const DiscreteDistribution& d, double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("es_left: p must lie in (0,1]");
    if (p == 1.0) return d.mean();
    const auto& cum = d.cumulative();
    const auto& sup = d.support();
    const auto& w = d.probs();
    std::size_t m = cum.size() - 1;
    for (std::size_t i = 0; i < cum.size(); ++i) {
        if (cum[i] >= p) {
            m = i;
            break;
        }
    }
    const double below = m == 0 ? 0.0 : cum[m - 1];
    double acc = (p - below) * sup[m];
    for (std::size_t j = 0; j < m; ++j) acc += w[j] * sup[j];
    return acc / p;
}

/// Expectile of an atomic law by exact segment scan: psi is piecewise linear
/// and strictly decreasing, so the root segment is found by sign change and
/// solved in closed form.
inline double expectile(const DiscreteDistribution& d, double p) {
    detail::check_open_unit(p, "expectile");
    const auto& sup = d.support();
    const auto& w = d.probs();
    const std::size_t n = sup.size();
    std::vector<double> wcum(n + 1, 0.0), mcum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        wcum[i + 1] = wcum[i] + w[i];
        mcum[i + 1] = mcum[i] + w[i] * sup[i];
    }
    const double wtot = wcum[n];
    const double mtot = mcum[n];
    const double q = 1.0 - p;

    auto psi_at = [&](std::size_t k) {
        const double x = sup[k];
        return p * (mtot - mcum[k + 1] - (wtot - wcum[k + 1]) * x) -
               q * (wcum[k + 1] * x - mcum[k + 1]);
    };

    std::size_t k = 0;
    while (k < n && psi_at(k) > 0.0) ++k;
    if (k == n) return sup[n - 1];
    if (psi_at(k) == 0.0) return sup[k];
    return (p * (mtot - mcum[k]) + q * mcum[k]) / (p * (wtot - wcum[k]) + q * wcum[k]);
}

// ---------------------------------------------------------------------------
// variant dispatch

inline double quantile_right(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return quantile_right(x, p); }, d);
}
inline double quantile_left(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return quantile_left(x, p); }, d);
}
inline double es(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return es(x, p); }, d);
}
inline double es_left(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return es_left(x, p); }, d);
}
inline double expectile(const AnyDistribution& d, double p) {
    return std::visit([p](const auto& x) { return expectile(x, p); }, d);
}

} // namespace varmetrics

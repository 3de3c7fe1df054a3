#pragma once

// Scalar special functions used by the distribution layer: standard normal
// pdf/cdf/quantile, the regularized incomplete beta function, and Student-t
// pdf/cdf/quantile built on top of it.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace varmetrics {

inline constexpr double pi_const = 3.141592653589793238462643383279502884;

inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi_const);
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Inverse standard normal cdf. Rational initial approximation refined by one
/// Halley step against erfc, giving close to full double precision on (0,1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0,1)");

    static const double a[6] = {-3.969683028665376e+01,  2.209460984245205e+02,
                                -2.759285104469687e+02,  1.383577518672690e+02,
                                -3.066479806614716e+01,  2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01,  1.615858368580409e+02,
                                -1.556989798598866e+02,  6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = { 7.784695709041462e-03,  3.224671290700398e-01,
                                 2.445134137142996e+00,  3.754408661907416e+00};

    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement on f(x) = Phi(x) - p; skipped beyond |x| ~ 37 where
    // exp(x^2/2) overflows and the cdf underflows, and the rational start is
    // all we can do in double anyway.
    if (std::fabs(x) < 37.0) {
        double e = normal_cdf(x) - p;
        double u = e * std::sqrt(2.0 * pi_const) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double incbeta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-16;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double incbeta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0))
        throw std::domain_error("incbeta: a and b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::incbeta_cf(a, b, x) / a;
    return 1.0 - front * detail::incbeta_cf(b, a, 1.0 - x) / b;
}

inline double student_t_pdf(double x, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_pdf: nu must be positive");
    double lg = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu);
    return std::exp(lg) / std::sqrt(nu * pi_const) *
           std::pow(1.0 + x * x / nu, -0.5 * (nu + 1.0));
}

inline double student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_cdf: nu must be positive");
    if (x == 0.0) return 0.5;
    double ib = incbeta(0.5 * nu, 0.5, nu / (nu + x * x));
    return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

/// Inverse Student-t cdf. Newton iteration from a normal-based start with a
/// monotone bisection fallback; accuracy target 1e-10.
inline double student_t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("student_t_quantile: p must lie in (0,1)");
    if (!(nu > 0.0)) throw std::domain_error("student_t_quantile: nu must be positive");
    if (p == 0.5) return 0.0;

    // Work with the tail mass q = min(p, 1-p) against the survival function
    // of the upper half; mirror at the end. The tail mass stays exact for
    // tiny levels, where the cumulative 1-p would round to 1.
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;

    // P(T > x) for x >= 0, full relative precision deep in the tail.
    auto sf = [nu](double x) {
        return 0.5 * incbeta(0.5 * nu, 0.5, nu / (nu + x * x));
    };

    // Bracket [lo, hi] with sf(hi) <= q, expanding geometrically.
    double lo = 0.0;
    double hi = std::max(1.0, -2.0 * normal_quantile(q));
    while (sf(hi) > q) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) break;
    }

    double x = std::min(std::max(-normal_quantile(q), lo), hi);
    for (int it = 0; it < 200; ++it) {
        double f = q - sf(x);
        if (f > 0.0) hi = x; else lo = x;
        double dfdx = student_t_pdf(x, nu);
        double step = f / dfdx;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);   // bisect when Newton leaves the bracket
        if (std::fabs(xn - x) <= 1e-12 * (1.0 + std::fabs(xn))) { x = xn; break; }
        x = xn;
    }
    return upper ? x : -x;
}

} // namespace varmetrics

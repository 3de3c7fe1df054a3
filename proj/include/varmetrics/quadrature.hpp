#pragma once

// Deterministic adaptive quadrature on finite intervals: 15-point
// Gauss-Kronrod panels refined by bisection until the local error estimate
// meets the budget. A clustering change of variables handles the integrable
// endpoint singularities that quantile transforms produce on (0,1).

#include <cmath>
#include <cstddef>

namespace varmetrics {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;   // accumulated error estimate, >= 0
};

namespace detail {

// 7/15 Gauss-Kronrod nodes and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double g_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(F& f, double a, double b, double& gk, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double res_g = fc * g_weights[3];
    double res_k = fc * gk_weights[7];
    for (int i = 0; i < 7; ++i) {
        double fl = f(c - h * gk_nodes[i]);
        double fr = f(c + h * gk_nodes[i]);
        res_k += gk_weights[i] * (fl + fr);
        if (i % 2 == 1)
            res_g += g_weights[i / 2] * (fl + fr);
    }
    gk = res_k * h;
    err = std::fabs((res_k - res_g) * h);
}

template <class F>
inline void adapt_rec(F& f, double a, double b, double tol, int depth,
                      QuadResult& acc) {
    double gk, err;
    gk15_panel(f, a, b, gk, err);
    if (err <= tol || depth <= 0 || !(b - a > 1e-300)) {
        acc.value += gk;
        acc.abs_error += err;
        return;
    }
    double c = 0.5 * (a + b);
    adapt_rec(f, a, c, 0.5 * tol, depth - 1, acc);
    adapt_rec(f, c, b, 0.5 * tol, depth - 1, acc);
}

} // namespace detail

/// Adaptive integral of f over [a, b] with absolute tolerance abs_tol.
/// Endpoints are never evaluated. Traversal order is fixed, so results are
/// bitwise deterministic for a given integrand.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-8,
                     int max_depth = 50) {
    QuadResult acc;
    if (a == b) return acc;
    double sign = 1.0;
    if (a > b) { std::swap(a, b); sign = -1.0; }
    detail::adapt_rec(f, a, b, abs_tol, max_depth, acc);
    acc.value *= sign;
    return acc;
}

/// Integral of f over (a, b) with integration points clustered toward both
/// endpoints via u = a + (b-a) * x^k / (x^k + (1-x)^k). Softens integrable
/// endpoint singularities such as those of heavy-tailed quantile functions.
template <class F>
QuadResult integrate_clustered(F&& f, double a, double b, double abs_tol = 1e-8,
                               int kappa = 5, int max_depth = 50) {
    const double len = b - a;
    if (len == 0.0) return {};
    auto g = [&](double x) {
        double xk = std::pow(x, kappa);
        double yk = std::pow(1.0 - x, kappa);
        double den = xk + yk;
        double u = a + len * xk / den;
        // rounding can land exactly on an endpoint in deep panels; keep the
        // evaluation strictly interior, where the integrand is defined
        if (u <= a) u = std::nextafter(a, b);
        if (u >= b) u = std::nextafter(b, a);
        double du = len * kappa * std::pow(x * (1.0 - x), kappa - 1) / (den * den);
        return f(u) * du;
    };
    return integrate(g, 0.0, 1.0, abs_tol, max_depth);
}

} // namespace varmetrics

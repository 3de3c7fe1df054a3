#pragma once

// Order-statistic estimators on sorted samples. Every function takes data
// sorted ascending; sorting is the caller's job so one sort can feed many
// estimators. Index conventions follow the right/left quantile pair
//   Q_p  = a[floor(n p)]        (right, clamped to the last element)
//   Q_p- = a[ceil(n p) - 1]     (left)
// and the tail averages interpolate the boundary atom so that the estimator
// is exact for the empirical law.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace varmetrics {

namespace detail {

inline void require_nonempty(std::span<const double> a) {
    if (a.empty()) throw std::invalid_argument("sample estimator: empty sample");
}

} // namespace detail

inline double sample_quantile_right(std::span<const double> sorted, double p) {
    detail::require_nonempty(sorted);
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("sample_quantile_right: p must lie in [0,1)");
    const auto n = static_cast<double>(sorted.size());
    auto k = static_cast<std::size_t>(std::floor(n * p));
    if (k >= sorted.size()) k = sorted.size() - 1;
    return sorted[k];
}

inline double sample_quantile_left(std::span<const double> sorted, double p) {
    detail::require_nonempty(sorted);
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("sample_quantile_left: p must lie in (0,1]");
    const auto n = static_cast<double>(sorted.size());
    auto m = static_cast<std::size_t>(std::ceil(n * p));
    if (m < 1) m = 1;
    if (m > sorted.size()) m = sorted.size();
    return sorted[m - 1];
}

/// Upper tail average (1/(1-p)) * int_p^1 Q_r dr of the empirical law.
inline double sample_es(std::span<const double> sorted, double p) {
    detail::require_nonempty(sorted);
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("sample_es: p must lie in [0,1)");
    const std::size_t n = sorted.size();
    const auto nd = static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::floor(nd * p));
    if (k >= n) k = n - 1;
    double acc = sorted[k] * ((static_cast<double>(k) + 1.0) / nd - p);
    for (std::size_t j = k + 1; j < n; ++j) acc += sorted[j] / nd;
    return acc / (1.0 - p);
}

/// Lower tail average (1/p) * int_0^p Q_r dr of the empirical law.
inline double sample_es_left(std::span<const double> sorted, double p) {
    detail::require_nonempty(sorted);
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("sample_es_left: p must lie in (0,1]");
    const std::size_t n = sorted.size();
    const auto nd = static_cast<double>(n);
    auto m = static_cast<std::size_t>(std::ceil(nd * p));
    if (m < 1) m = 1;
    if (m > n) m = n;
    double acc = (p - (static_cast<double>(m) - 1.0) / nd) * sorted[m - 1];
    for (std::size_t j = 0; j + 1 < m; ++j) acc += sorted[j] / nd;
    return acc / p;
}

/// Root of psi(x) = p E[(X-x)_+] - (1-p) E[(x-X)_+] for the empirical law.
/// psi is piecewise linear and strictly decreasing, so a prefix-sum scan
/// finds the segment containing the root and solves it exactly.
inline double sample_expectile(std::span<const double> sorted, double p) {
    detail::require_nonempty(sorted);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("sample_expectile: p must lie in (0,1)");
    const std::size_t n = sorted.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];
    const double total = prefix[n];
    const double q = 1.0 - p;

    auto psi_at = [&](std::size_t k) {
        // value of psi at the atom sorted[k], counting atoms <= sorted[k] as k+1
        const double x = sorted[k];
        const double above = total - prefix[k + 1];
        const double cnt_above = static_cast<double>(n - k - 1);
        const double cnt_below = static_cast<double>(k + 1);
        return p * (above - cnt_above * x) - q * (cnt_below * x - prefix[k + 1]);
    };

    std::size_t k = 0;
    while (k < n && psi_at(k) > 0.0) ++k;
    if (k == n) return sorted[n - 1];  // numerically flat tail; root at the top atom
    if (psi_at(k) == 0.0) return sorted[k];
    // root lies strictly between sorted[k-1] and sorted[k]; k atoms sit below it
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    return (p * (total - prefix[k]) + q * prefix[k]) / (p * (nd - kd) + q * kd);
}

inline double sample_mean(std::span<const double> a) {
    detail::require_nonempty(a);
    return std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
}

/// Unbiased sample variance (divisor n-1).
inline double sample_variance(std::span<const double> a) {
    if (a.size() < 2) throw std::invalid_argument("sample_variance: needs at least two points");
    const double m = sample_mean(a);
    double acc = 0.0;
    for (double v : a) acc += (v - m) * (v - m);
    return acc / (static_cast<double>(a.size()) - 1.0);
}

inline double sample_range(std::span<const double> sorted) {
    detail::require_nonempty(sorted);
    return sorted.back() - sorted.front();
}

/// Interquantile difference Q_p - Q_{1-p}^- of the empirical law.
inline double sample_delta_q(std::span<const double> sorted, double p) {
    if (p == 1.0) return sample_range(sorted);
    return sample_quantile_right(sorted, p) - sample_quantile_left(sorted, 1.0 - p);
}

/// Tail-average difference ES_p - ES_{1-p}^- of the empirical law.
inline double sample_delta_es(std::span<const double> sorted, double p) {
    if (p == 1.0) return sample_range(sorted);
    return sample_es(sorted, p) - sample_es_left(sorted, 1.0 - p);
}

/// Inter-expectile difference ex_p - ex_{1-p} of the empirical law.
inline double sample_delta_ex(std::span<const double> sorted, double p) {
    return sample_expectile(sorted, p) - sample_expectile(sorted, 1.0 - p);
}

} // namespace varmetrics

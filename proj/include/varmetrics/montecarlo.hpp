#pragma once

// Monte Carlo study of the empirical interdifference estimators: simulate
// iid samples by inverse transform, apply the order-statistic estimators,
// and compare the standardized errors sqrt(n)(est - true) to the normal
// limit with the quadrature asymptotic variance as reference.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "rng.hpp"
#include "risk_measures.hpp"
#include "sample_stats.hpp"
#include "variability.hpp"

namespace varmetrics {

enum class EstimatorKind { dq, des, dex };

inline const char* estimator_name(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::dq: return "dq";
        case EstimatorKind::des: return "des";
        case EstimatorKind::dex: return "dex";
    }
    return "?";
}

struct SimConfig {
    AnyDistribution dist;
    EstimatorKind estimator = EstimatorKind::dq;
    double p = 0.9;
    std::size_t n = 5000;
    std::size_t replications = 1000;
    std::uint64_t seed = 1;
    int histogram_bins = 60;
};

struct Histogram {
    std::vector<double> edges;        // bins + 1 ascending edges
    std::vector<std::size_t> counts;  // per bin; outliers clamp into end bins
};

struct SimResult {
    double true_value = 0.0;
    double sigma_sq = 0.0;            // NaN when no reference variance exists
    std::vector<double> estimates;
    std::vector<double> std_errors;   // e_i = sqrt(n) (estimate_i - true_value)
    double mean_e = 0.0;
    double var_e = 0.0;               // unbiased sample variance of e
    double ks_distance = 0.0;         // against N(0, sigma_sq); NaN if no reference
    Histogram hist;                   // of the raw errors estimate_i - true_value
};

namespace detail {

inline double apply_estimator(EstimatorKind k, std::span<const double> sorted, double p) {
    switch (k) {
        case EstimatorKind::dq: return sample_delta_q(sorted, p);
        case EstimatorKind::des: return sample_delta_es(sorted, p);
        case EstimatorKind::dex: return sample_delta_ex(sorted, p);
    }
    return 0.0;
}

inline double true_delta(const AnyDistribution& d, EstimatorKind k, double p) {
    switch (k) {
        case EstimatorKind::dq: return delta_q(d, p);
        case EstimatorKind::des: return delta_es(d, p);
        case EstimatorKind::dex: return delta_ex(d, p);
    }
    return 0.0;
}

inline double reference_sigma_sq(const AnyDistribution& d, EstimatorKind k, double p) {
    try {
        switch (k) {
            case EstimatorKind::dq: return sigma_q_sq(d, p).sigma_sq;
            case EstimatorKind::des: return sigma_es_sq(d, p).sigma_sq;
            case EstimatorKind::dex: return sigma_ex_sq(d, p).sigma_sq;
        }
    } catch (const std::domain_error&) {
        // atomic law or missing moments: no limit variance to report
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace detail

/// One iid sample of size n drawn by inverse transform from its own stream.
inline std::vector<double> draw_sorted_sample(const AnyDistribution& d, std::size_t n,
                                              SplitMix64& rng) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = quantile_right(d, rng.uniform01());
    std::sort(x.begin(), x.end());
    return x;
}

inline SimResult run_simulation(const SimConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("run_simulation: n must be at least 2");
    if (cfg.replications < 1)
        throw std::invalid_argument("run_simulation: needs at least one replication");
    if (cfg.histogram_bins < 1)
        throw std::invalid_argument("run_simulation: needs at least one histogram bin");

    SimResult res;
    res.true_value = detail::true_delta(cfg.dist, cfg.estimator, cfg.p);
    if (!std::isfinite(res.true_value))
        throw std::domain_error("run_simulation: the target measure is not finite for this law");
    res.sigma_sq = detail::reference_sigma_sq(cfg.dist, cfg.estimator, cfg.p);

    const auto R = cfg.replications;
    res.estimates.resize(R);
    res.std_errors.resize(R);
    const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
    for (std::size_t i = 0; i < R; ++i) {
        SplitMix64 rng = stream_for(cfg.seed, i);
        const auto sample = draw_sorted_sample(cfg.dist, cfg.n, rng);
        res.estimates[i] = detail::apply_estimator(cfg.estimator, sample, cfg.p);
        res.std_errors[i] = sqrt_n * (res.estimates[i] - res.true_value);
    }

    res.mean_e = sample_mean(res.std_errors);
    res.var_e = R >= 2 ? sample_variance(res.std_errors) : 0.0;

    if (std::isfinite(res.sigma_sq) && res.sigma_sq > 0.0) {
        const double s = std::sqrt(res.sigma_sq);
        std::vector<double> sorted_e = res.std_errors;
        std::sort(sorted_e.begin(), sorted_e.end());
        double ks = 0.0;
        const auto Rd = static_cast<double>(R);
        for (std::size_t i = 0; i < R; ++i) {
            const double F = normal_cdf(sorted_e[i] / s);
            ks = std::max(ks, std::fabs((static_cast<double>(i) + 1.0) / Rd - F));
            ks = std::max(ks, std::fabs(F - static_cast<double>(i) / Rd));
        }
        res.ks_distance = ks;
    } else {
        res.ks_distance = std::numeric_limits<double>::quiet_NaN();
    }

    // histogram of raw errors over mean +/- 4 reference standard deviations
    std::vector<double> raw(R);
    for (std::size_t i = 0; i < R; ++i) raw[i] = res.estimates[i] - res.true_value;
    const double m = sample_mean(raw);
    double s_ref;
    if (std::isfinite(res.sigma_sq) && res.sigma_sq > 0.0) {
        s_ref = std::sqrt(res.sigma_sq / static_cast<double>(cfg.n));
    } else {
        s_ref = R >= 2 ? std::sqrt(sample_variance(raw)) : 0.0;
    }
    if (!(s_ref > 0.0)) s_ref = 0.5;  // degenerate spread: unit-width window
    const int nb = cfg.histogram_bins;
    const double lo = m - 4.0 * s_ref;
    const double width = 8.0 * s_ref / nb;
    res.hist.edges.resize(static_cast<std::size_t>(nb) + 1);
    for (int b = 0; b <= nb; ++b) res.hist.edges[static_cast<std::size_t>(b)] = lo + width * b;
    res.hist.counts.assign(static_cast<std::size_t>(nb), 0);
    for (double v : raw) {
        auto idx = static_cast<long>(std::floor((v - lo) / width));
        idx = std::clamp(idx, 0L, static_cast<long>(nb) - 1L);
        ++res.hist.counts[static_cast<std::size_t>(idx)];
    }
    return res;
}

// ---------------------------------------------------------------------------
// histogram serialization (overlay density is the N(0, sigma_sq/n) limit of
// the raw error, so the reference scale must be passed alongside)

struct HistogramRow {
    double bin_left = 0.0;
    double bin_right = 0.0;
    std::size_t count = 0;
    std::optional<double> normal_density;
};

inline void export_histogram(const SimResult& res, std::size_t n, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_histogram: cannot write " + path);
    const bool have_ref = std::isfinite(res.sigma_sq) && res.sigma_sq > 0.0;
    const double s = have_ref ? std::sqrt(res.sigma_sq / static_cast<double>(n)) : 0.0;
    out << "bin_left,bin_right,count,normal_density_at_midpoint\n";
    char buf[128];
    for (std::size_t b = 0; b + 1 < res.hist.edges.size(); ++b) {
        const double l = res.hist.edges[b];
        const double r = res.hist.edges[b + 1];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,", l, r, res.hist.counts[b]);
        out << buf;
        if (have_ref) {
            const double mid = 0.5 * (l + r);
            std::snprintf(buf, sizeof buf, "%.17g", normal_pdf(mid / s) / s);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("export_histogram: write failed for " + path);
}

inline std::vector<HistogramRow> read_histogram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_histogram: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line.find("bin_left,bin_right,count,normal_density_at_midpoint") != 0)
        throw std::runtime_error("read_histogram: bad header in " + path);
    std::vector<HistogramRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        HistogramRow row;
        std::getline(ss, tok, ',');
        row.bin_left = std::stod(tok);
        std::getline(ss, tok, ',');
        row.bin_right = std::stod(tok);
        std::getline(ss, tok, ',');
        row.count = static_cast<std::size_t>(std::stoull(tok));
        if (std::getline(ss, tok, ',') && !tok.empty()) row.normal_density = std::stod(tok);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// consistency sweep

struct ConsistencyRow {
    std::size_t n = 0;
    double mae = 0.0;  // mean absolute estimation error over the replications
};

inline std::vector<ConsistencyRow> consistency_sweep(const AnyDistribution& dist,
                                                     EstimatorKind estimator, double p,
                                                     const std::vector<std::size_t>& n_grid,
                                                     std::size_t R, std::uint64_t seed) {
    if (n_grid.empty()) throw std::invalid_argument("consistency_sweep: empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (!(n_grid[i] > n_grid[i - 1]))
            throw std::invalid_argument("consistency_sweep: n grid must be increasing");
    const double truth = detail::true_delta(dist, estimator, p);
    std::vector<ConsistencyRow> rows;
    rows.reserve(n_grid.size());
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        double acc = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            SplitMix64 rng = stream_for(seed, gi * R + r);
            const auto sample = draw_sorted_sample(dist, n_grid[gi], rng);
            acc += std::fabs(detail::apply_estimator(estimator, sample, p) - truth);
        }
        rows.push_back({n_grid[gi], acc / static_cast<double>(R)});
    }
    return rows;
}

/// Least-squares slope of log(mae) against log(n); NaN if any mae is zero.
inline double loglog_slope(const std::vector<ConsistencyRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("loglog_slope: needs at least two rows");
    for (const auto& r : rows)
        if (!(r.mae > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto k = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(static_cast<double>(r.n));
        const double y = std::log(r.mae);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace varmetrics

#pragma once

// Price/loss pipeline: CSV price ingestion, log-loss transformation, rolling
// estimation of the three interdifferences on a trailing window, and the
// ratio series. Windows hold w consecutive loss observations; the output row
// carries the date of the last observation in its window, so a consumer
// applies it from the next trading day on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "rng.hpp"
#include "risk_measures.hpp"
#include "sample_stats.hpp"

namespace varmetrics {

namespace detail {

// civil-calendar day arithmetic (proleptic Gregorian, days since 1970-01-01)
inline long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

inline void civil_from_days(long z, int& y, int& m, int& d) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long yy = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

inline bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int days_in_month(int y, int m) {
    static const int len[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && leap_year(y)) return 29;
    return len[m - 1];
}

/// Strict ISO-8601 calendar date -> serial day; throws on malformed input.
inline long parse_date(const std::string& s) {
    auto bad = [&]() -> long {
        throw std::invalid_argument("bad date '" + s + "' (expected YYYY-MM-DD)");
    };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return bad();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return bad();
    const int y = std::stoi(s.substr(0, 4));
    const int m = std::stoi(s.substr(5, 2));
    const int d = std::stoi(s.substr(8, 2));
    if (y < 1 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return bad();
    return days_from_civil(y, m, d);
}

inline std::string format_date(long serial) {
    int y, m, d;
    civil_from_days(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

inline std::string strip_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
    return s;
}

inline double parse_positive(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + tok + "'");
    }
    if (pos != tok.size() || !std::isfinite(v))
        throw std::invalid_argument(std::string("bad ") + what + " '" + tok + "'");
    return v;
}

} // namespace detail

struct PriceSeries {
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    std::vector<double> closes;     // > 0
};

struct LossSeries {
    std::vector<std::string> dates;
    std::vector<double> losses;  // log-losses -ln(P_t / P_{t-1})
};

inline PriceSeries load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_prices: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != "date,close")
        throw std::runtime_error("load_prices: " + path + ": expected header 'date,close'");
    PriceSeries ps;
    long prev_serial = 0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw std::runtime_error("load_prices: " + path + " row " + std::to_string(row) +
                                     ": expected 'date,close'");
        const std::string dtok = line.substr(0, comma);
        const std::string ptok = line.substr(comma + 1);
        long serial;
        double close;
        try {
            serial = detail::parse_date(dtok);
            close = detail::parse_positive(ptok, "price");
        } catch (const std::exception& e) {
            throw std::runtime_error("load_prices: " + path + " row " + std::to_string(row) +
                                     ": " + e.what());
        }
        if (!(close > 0.0))
            throw std::runtime_error("load_prices: " + path + " row " + std::to_string(row) +
                                     ": price must be positive");
        if (!ps.dates.empty() && serial <= prev_serial)
            throw std::runtime_error("load_prices: " + path + " row " + std::to_string(row) +
                                     ": dates must be strictly increasing");
        ps.dates.push_back(dtok);
        ps.closes.push_back(close);
        prev_serial = serial;
    }
    if (ps.dates.size() < 2)
        throw std::runtime_error("load_prices: " + path + ": needs at least 2 rows");
    return ps;
}

inline LossSeries to_log_losses(const PriceSeries& ps) {
    if (ps.closes.size() < 2)
        throw std::invalid_argument("to_log_losses: needs at least 2 prices");
    LossSeries ls;
    ls.dates.assign(ps.dates.begin() + 1, ps.dates.end());
    ls.losses.resize(ps.closes.size() - 1);
    for (std::size_t i = 1; i < ps.closes.size(); ++i)
        ls.losses[i - 1] = std::log(ps.closes[i - 1]) - std::log(ps.closes[i]);
    return ls;
}

struct RollingConfig {
    std::size_t window = 253;
    double p = 0.95;   // inter-quantile level
    double q = 0.875;  // inter-ES level
    double r = 0.99;   // inter-expectile level
};

struct RatioRow {
    std::string date;                    // last observation inside the window
    std::optional<double> ratio_es_q;    // delta_es(q) / delta_q(p)
    std::optional<double> ratio_es_ex;   // delta_es(q) / delta_ex(r)
};

inline std::vector<RatioRow> rolling_ratios(const LossSeries& ls, const RollingConfig& cfg) {
    if (cfg.window < 2) throw std::invalid_argument("rolling_ratios: window must be >= 2");
    if (!(cfg.p >= 0.5 && cfg.p < 1.0))
        throw std::invalid_argument("rolling_ratios: p must lie in [1/2,1)");
    if (!(cfg.q > 0.0 && cfg.q < 1.0))
        throw std::invalid_argument("rolling_ratios: q must lie in (0,1)");
    if (!(cfg.r > 0.5 && cfg.r < 1.0))
        throw std::invalid_argument("rolling_ratios: r must lie in (1/2,1)");
    if (ls.losses.size() < cfg.window)
        throw std::invalid_argument("rolling_ratios: series shorter than the window");

    std::vector<RatioRow> rows;
    rows.reserve(ls.losses.size() - cfg.window + 1);
    std::vector<double> buf(cfg.window);
    for (std::size_t end = cfg.window - 1; end < ls.losses.size(); ++end) {
        const std::size_t begin = end + 1 - cfg.window;
        std::copy(ls.losses.begin() + static_cast<std::ptrdiff_t>(begin),
                  ls.losses.begin() + static_cast<std::ptrdiff_t>(end + 1), buf.begin());
        std::sort(buf.begin(), buf.end());
        const double dq = sample_delta_q(buf, cfg.p);
        const double des = sample_delta_es(buf, cfg.q);
        const double dex = sample_delta_ex(buf, cfg.r);
        RatioRow row;
        row.date = ls.dates[end];
        if (dq > 0.0) row.ratio_es_q = des / dq;
        if (dex > 0.0) row.ratio_es_ex = des / dex;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void export_ratios(const std::vector<RatioRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_ratios: cannot write " + path);
    out << "date,ratio_es_q,ratio_es_ex\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.date << ',';
        if (r.ratio_es_q) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.ratio_es_q);
            out << buf;
        }
        out << ',';
        if (r.ratio_es_ex) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.ratio_es_ex);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("export_ratios: write failed for " + path);
}

inline std::vector<RatioRow> read_ratios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_ratios: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != "date,ratio_es_q,ratio_es_ex")
        throw std::runtime_error("read_ratios: bad header in " + path);
    std::vector<RatioRow> rows;
    std::size_t rownum = 1;
    while (std::getline(in, line)) {
        ++rownum;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string date, t1, t2;
        if (!std::getline(ss, date, ','))
            throw std::runtime_error("read_ratios: " + path + " row " + std::to_string(rownum));
        std::getline(ss, t1, ',');
        std::getline(ss, t2, ',');
        RatioRow row;
        row.date = date;
        if (!t1.empty()) row.ratio_es_q = std::stod(t1);
        if (!t2.empty()) row.ratio_es_ex = std::stod(t2);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Synthetic iid loss series drawn by inverse transform; dates are
/// consecutive calendar days so the series is loadable anywhere dated
/// losses are accepted.
inline LossSeries synth_losses(const AnyDistribution& dist, std::size_t n,
                               std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("synth_losses: n must be >= 1");
    LossSeries ls;
    ls.dates.resize(n);
    ls.losses.resize(n);
    SplitMix64 rng = stream_for(seed, 0);
    const long start = detail::days_from_civil(2000, 1, 3);
    for (std::size_t i = 0; i < n; ++i) {
        ls.dates[i] = detail::format_date(start + static_cast<long>(i));
        ls.losses[i] = quantile_right(dist, rng.uniform01());
    }
    return ls;
}

inline void write_losses(const LossSeries& ls, std::ostream& out) {
    out << "date,loss\n";
    char buf[64];
    for (std::size_t i = 0; i < ls.losses.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", ls.losses[i]);
        out << ls.dates[i] << ',' << buf << '\n';
    }
}

inline void write_losses(const LossSeries& ls, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_losses: cannot write " + path);
    write_losses(ls, static_cast<std::ostream&>(out));
    if (!out) throw std::runtime_error("write_losses: write failed for " + path);
}

inline LossSeries read_losses(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_losses: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != "date,loss")
        throw std::runtime_error("read_losses: " + path + ": expected header 'date,loss'");
    LossSeries ls;
    long prev_serial = 0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_losses: " + path + " row " + std::to_string(row) +
                                     ": expected 'date,loss'");
        const std::string dtok = line.substr(0, comma);
        const std::string ltok = line.substr(comma + 1);
        long serial;
        double loss;
        try {
            serial = detail::parse_date(dtok);
            std::size_t pos = 0;
            loss = std::stod(ltok, &pos);
            if (pos != ltok.size() || !std::isfinite(loss))
                throw std::invalid_argument("bad loss '" + ltok + "'");
        } catch (const std::exception& e) {
            throw std::runtime_error("read_losses: " + path + " row " + std::to_string(row) +
                                     ": " + e.what());
        }
        if (!ls.dates.empty() && serial <= prev_serial)
            throw std::runtime_error("read_losses: " + path + " row " + std::to_string(row) +
                                     ": dates must be strictly increasing");
        ls.dates.push_back(dtok);
        ls.losses.push_back(loss);
        prev_serial = serial;
    }
    return ls;
}

} // namespace varmetrics

#pragma once

// Property grid for the eight variability measures: relevance, continuity,
// symmetry, comonotonic additivity, convex-order consistency, convexity,
// mixture concavity, and location invariance, plus a standardization row
// (permutation invariance, zero on point masses, positive homogeneity).
// Positive cells are established by seeded randomized trials on finite
// sample spaces; negative cells are certified by stored counterexamples
// with exact or near-exact arithmetic, never by random search.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "distributions.hpp"
#include "rng.hpp"
#include "variability.hpp"

namespace varmetrics {

enum class MeasureKind { dq, des, dex, range, variance, std_dev, mad, gini };

inline constexpr std::array<MeasureKind, 8> table1_measures = {
    MeasureKind::dq,  MeasureKind::des,      MeasureKind::dex, MeasureKind::range,
    MeasureKind::variance, MeasureKind::std_dev, MeasureKind::mad, MeasureKind::gini};

inline const char* measure_label(MeasureKind m) {
    switch (m) {
        case MeasureKind::dq: return "dq";
        case MeasureKind::des: return "des";
        case MeasureKind::dex: return "dex";
        case MeasureKind::range: return "range";
        case MeasureKind::variance: return "var";
        case MeasureKind::std_dev: return "std";
        case MeasureKind::mad: return "mad";
        case MeasureKind::gini: return "gini";
    }
    return "?";
}

inline double homogeneity_alpha(MeasureKind m) {
    return m == MeasureKind::variance ? 2.0 : 1.0;
}

inline double eval_measure(MeasureKind m, const DiscreteDistribution& d, double p) {
    switch (m) {
        case MeasureKind::dq: return delta_q(d, p);
        case MeasureKind::des: return delta_es(d, p);
        case MeasureKind::dex: return delta_ex(d, p);
        case MeasureKind::range: return range_measure(d);
        case MeasureKind::variance: return variance(d);
        case MeasureKind::std_dev: return std_dev(d);
        case MeasureKind::mad: return mad(d);
        case MeasureKind::gini: return gini_d(d);
    }
    return 0.0;
}

enum class PropertyKind {
    relevance,
    continuity,
    symmetry,
    c_additivity,
    cx_consistency,
    convexity,
    mixture_concavity,
    location_invariance,
    standardization
};

inline constexpr std::array<PropertyKind, 9> table1_properties = {
    PropertyKind::relevance,      PropertyKind::continuity,
    PropertyKind::symmetry,       PropertyKind::c_additivity,
    PropertyKind::cx_consistency, PropertyKind::convexity,
    PropertyKind::mixture_concavity, PropertyKind::location_invariance,
    PropertyKind::standardization};

inline const char* property_label(PropertyKind p) {
    switch (p) {
        case PropertyKind::relevance: return "relevance";
        case PropertyKind::continuity: return "continuity";
        case PropertyKind::symmetry: return "symmetry";
        case PropertyKind::c_additivity: return "c-additivity";
        case PropertyKind::cx_consistency: return "cx-consistency";
        case PropertyKind::convexity: return "convexity";
        case PropertyKind::mixture_concavity: return "mix-concavity";
        case PropertyKind::location_invariance: return "loc-invariance";
        case PropertyKind::standardization: return "standardization";
    }
    return "?";
}

/// The expected yes/no pattern; the suite verifies this exact pattern.
inline bool table1_expected_yes(PropertyKind pr, MeasureKind m) {
    switch (pr) {
        case PropertyKind::relevance:
            return m != MeasureKind::dq;
        case PropertyKind::continuity:
        case PropertyKind::symmetry:
        case PropertyKind::location_invariance:
        case PropertyKind::standardization:
            return true;
        case PropertyKind::c_additivity:
            return m == MeasureKind::dq || m == MeasureKind::des ||
                   m == MeasureKind::range || m == MeasureKind::gini;
        case PropertyKind::cx_consistency:
        case PropertyKind::convexity:
            return m != MeasureKind::dq;
        case PropertyKind::mixture_concavity:
            return m == MeasureKind::des || m == MeasureKind::variance ||
                   m == MeasureKind::std_dev || m == MeasureKind::gini ||
                   m == MeasureKind::range;
    }
    return true;
}

namespace detail {

inline double unif(SplitMix64& g, double a, double b) { return a + (b - a) * g.uniform01(); }

inline std::size_t rand_index(SplitMix64& g, std::size_t n) {
    return static_cast<std::size_t>(g.next() % n);
}

inline FiniteRV random_rv(SplitMix64& g, std::size_t min_n = 2, std::size_t max_n = 10) {
    const std::size_t n = min_n + rand_index(g, max_n - min_n + 1);
    std::vector<double> a(n);
    for (;;) {
        for (double& v : a) v = unif(g, -1.0, 1.0);
        double lo = a[0], hi = a[0];
        for (double v : a) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi > lo) break;
    }
    return FiniteRV{a};
}

inline double random_level(SplitMix64& g) { return 0.55 + 0.44 * g.uniform01(); }

inline DiscreteDistribution random_law(SplitMix64& g, std::size_t min_n = 2,
                                       std::size_t max_n = 8) {
    const std::size_t n = min_n + rand_index(g, max_n - min_n + 1);
    std::vector<double> sup(n), pr(n);
    for (;;) {
        for (double& v : sup) v = unif(g, -1.0, 1.0);
        std::sort(sup.begin(), sup.end());
        bool distinct = true;
        for (std::size_t i = 1; i < n; ++i)
            if (!(sup[i] > sup[i - 1])) distinct = false;
        if (distinct) break;
    }
    double s = 0.0;
    for (double& v : pr) {
        v = unif(g, 0.05, 1.0);
        s += v;
    }
    for (double& v : pr) v /= s;
    return {std::move(sup), std::move(pr)};
}

/// Comonotone pair on a shared n-outcome space: two sorted atom vectors
/// re-indexed by one common random permutation.
inline std::pair<FiniteRV, FiniteRV> comonotone_pair(SplitMix64& g) {
    const std::size_t n = 2 + rand_index(g, 9);
    std::vector<double> a(n), b(n);
    for (double& v : a) v = unif(g, -1.0, 1.0);
    for (double& v : b) v = unif(g, -1.0, 1.0);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rand_index(g, i)]);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a[perm[i]];
        y[i] = b[perm[i]];
    }
    return {FiniteRV{std::move(x)}, FiniteRV{std::move(y)}};
}

/// Convex-order dominated pair: X is Y averaged over a random partition of
/// the outcomes (a conditional expectation), hence X precedes Y in convex
/// order with equal means.
inline std::pair<FiniteRV, FiniteRV> cx_pair(SplitMix64& g) {
    const FiniteRV y = random_rv(g, 3, 10);
    const std::size_t n = y.size();
    const std::size_t groups = 1 + rand_index(g, n);
    std::vector<std::size_t> assign(n);
    for (auto& a : assign) a = rand_index(g, groups);
    std::vector<double> sum(groups, 0.0);
    std::vector<std::size_t> cnt(groups, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[assign[i]] += y.atoms()[i];
        ++cnt[assign[i]];
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = sum[assign[i]] / static_cast<double>(cnt[assign[i]]);
    return {FiniteRV{std::move(x)}, y};
}

inline std::string describe_violation(const char* what, double lhs, double rhs) {
    std::ostringstream os;
    os << what << ": " << lhs << " vs " << rhs;
    return os.str();
}

// ---- positive-cell trial runners ----

inline bool trials_relevance(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        const FiniteRV x = random_rv(g);
        const double p = random_level(g);
        const double v = eval_measure(m, x.law(), p);
        if (!(v > 0.0) || !(v <= 2.0 + 1e-10)) {
            note = describe_violation("relevance bound", v, 2.0);
            return false;
        }
    }
    return true;
}

inline bool trials_continuity(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        const FiniteRV x = random_rv(g);
        const double p = random_level(g);
        const double v = eval_measure(m, x.law(), p);
        double big = 0.0;
        for (double a : x.atoms()) big = std::max(big, std::fabs(a));
        if (eval_measure(m, x.truncated(big).law(), p) != v) {
            note = "truncation at the sup norm changed the value";
            return false;
        }
        for (int k = 2; k <= 6; ++k) {
            const double mk = big * (1.0 - std::pow(2.0, -k));
            const double vk = eval_measure(m, x.truncated(mk).law(), p);
            if (std::fabs(vk - v) > 8.0 * (big - mk) + 1e-12) {
                note = describe_violation("truncation continuity", vk, v);
                return false;
            }
        }
    }
    return true;
}

inline bool trials_symmetry(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        const DiscreteDistribution d = random_rv(g).law();
        const double p = random_level(g);
        const double v = eval_measure(m, d, p);
        const double w = eval_measure(m, d.negate(), p);
        if (std::fabs(v - w) > 1e-10 * (1.0 + std::fabs(v))) {
            note = describe_violation("negation symmetry", w, v);
            return false;
        }
    }
    return true;
}

inline bool trials_c_additivity(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        auto [x, y] = comonotone_pair(g);
        const double p = random_level(g);
        const double lhs = eval_measure(m, (x + y).law(), p);
        const double rhs = eval_measure(m, x.law(), p) + eval_measure(m, y.law(), p);
        if (std::fabs(lhs - rhs) > 1e-10 * (1.0 + std::fabs(rhs))) {
            note = describe_violation("comonotone additivity", lhs, rhs);
            return false;
        }
    }
    return true;
}

inline bool trials_cx_consistency(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        auto [x, y] = cx_pair(g);
        const double p = random_level(g);
        const double vx = eval_measure(m, x.law(), p);
        const double vy = eval_measure(m, y.law(), p);
        if (vx > vy + 1e-10 * (1.0 + std::fabs(vy))) {
            note = describe_violation("convex-order consistency", vx, vy);
            return false;
        }
    }
    return true;
}

inline bool trials_convexity(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        const std::size_t n = 2 + rand_index(g, 9);
        std::vector<double> xa(n), ya(n);
        for (double& v : xa) v = unif(g, -1.0, 1.0);
        for (double& v : ya) v = unif(g, -1.0, 1.0);
        const FiniteRV x{xa}, y{ya};
        const double lam = unif(g, 0.05, 0.95);
        const double p = random_level(g);
        const double lhs = eval_measure(m, (lam * x + (1.0 - lam) * y).law(), p);
        const double rhs = lam * eval_measure(m, x.law(), p) +
                           (1.0 - lam) * eval_measure(m, y.law(), p);
        if (lhs > rhs + 1e-10 * (1.0 + std::fabs(rhs))) {
            note = describe_violation("convexity", lhs, rhs);
            return false;
        }
    }
    return true;
}

inline bool trials_mixture_concavity(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    for (int t = 0; t < T; ++t) {
        const DiscreteDistribution f = random_law(g);
        const DiscreteDistribution h = random_law(g);
        const double lam = unif(g, 0.05, 0.95);
        const std::array<DiscreteDistribution, 2> laws = {f, h};
        const std::array<double, 2> w = {lam, 1.0 - lam};
        const DiscreteDistribution mix = DiscreteDistribution::mixture(laws, w);
        const double p = random_level(g);
        const double lhs = eval_measure(m, mix, p);
        const double rhs =
            lam * eval_measure(m, f, p) + (1.0 - lam) * eval_measure(m, h, p);
        if (lhs < rhs - 1e-10 * (1.0 + std::fabs(rhs))) {
            note = describe_violation("mixture concavity", lhs, rhs);
            return false;
        }
    }
    return true;
}

inline bool trials_location_invariance(MeasureKind m, SplitMix64& g, int T,
                                       std::string& note) {
    for (int t = 0; t < T; ++t) {
        const FiniteRV x = random_rv(g);
        const double c = unif(g, -2.0, 2.0);
        const double p = random_level(g);
        const double v = eval_measure(m, x.law(), p);
        const double w = eval_measure(m, (x + c).law(), p);
        if (std::fabs(v - w) > 1e-10 * (1.0 + std::fabs(v))) {
            note = describe_violation("location invariance", w, v);
            return false;
        }
    }
    return true;
}

inline bool trials_standardization(MeasureKind m, SplitMix64& g, int T, std::string& note) {
    const double alpha = homogeneity_alpha(m);
    for (int t = 0; t < T; ++t) {
        const double p = random_level(g);
        // point masses map to zero
        const double c = unif(g, -2.0, 2.0);
        const DiscreteDistribution point({c}, {1.0});
        const double v0 = eval_measure(m, point, p);
        if (std::fabs(v0) > 1e-12 * (1.0 + std::fabs(c))) {
            note = describe_violation("point mass", v0, 0.0);
            return false;
        }
        // permutation invariance (the law is the same object either way)
        const FiniteRV x = random_rv(g);
        std::vector<double> shuffled = x.atoms();
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rand_index(g, i)]);
        const double v = eval_measure(m, x.law(), p);
        if (eval_measure(m, FiniteRV{shuffled}.law(), p) != v) {
            note = "permutation changed the value";
            return false;
        }
        // positive homogeneity of degree alpha
        const double lam = unif(g, 0.1, 3.0);
        const double lhs = eval_measure(m, (lam * x).law(), p);
        const double rhs = std::pow(lam, alpha) * v;
        if (std::fabs(lhs - rhs) > 1e-10 * (1.0 + std::fabs(rhs))) {
            note = describe_violation("homogeneity", lhs, rhs);
            return false;
        }
    }
    return true;
}

// ---- stored counterexamples for the negative cells ----

// relevance fails for dq: a Bernoulli with a small success weight has both
// quantiles at 0 although the law is not degenerate
inline bool no_relevance_dq(std::string& note) {
    const DiscreteDistribution x({0.0, 1.0}, {15.0 / 16.0, 1.0 / 16.0});
    const double v = delta_q(x, 0.875);
    if (v != 0.0) {
        note = describe_violation("expected zero interquantile spread", v, 0.0);
        return false;
    }
    return true;
}

// comonotone additivity fails for dex: gap is exactly -8/209
inline bool no_c_additivity_dex(std::string& note) {
    const FiniteRV x{{0.0, 10.0, 11.0}};
    const FiniteRV y{{0.0, 1.0, 2.0}};
    const double p = 0.9;
    const double gap = delta_ex((x + y).law(), p) - delta_ex(x.law(), p) -
                       delta_ex(y.law(), p);
    if (!(std::fabs(gap + 8.0 / 209.0) <= 1e-9)) {
        note = describe_violation("additivity gap", gap, -8.0 / 209.0);
        return false;
    }
    return true;
}

// comonotone additivity fails for the variance: var(2X) = 4 var(X)
inline bool no_c_additivity_variance(std::string& note) {
    const FiniteRV x{{0.0, 1.0}};
    const double gap = variance((x + x).law()) - 2.0 * variance(x.law());
    if (!(std::fabs(gap - 0.5) <= 1e-12)) {
        note = describe_violation("additivity gap", gap, 0.5);
        return false;
    }
    return true;
}

inline bool no_c_additivity_std(std::string& note) {
    const FiniteRV x{{0.0, 1.0, 2.0}};
    const FiniteRV y{{0.0, 1.0, 4.0}};
    const double gap =
        std_dev((x + y).law()) - std_dev(x.law()) - std_dev(y.law());
    if (!(gap < -0.02)) {
        note = describe_violation("additivity gap", gap, -0.02);
        return false;
    }
    return true;
}

inline bool no_c_additivity_mad(std::string& note) {
    const FiniteRV x{{0.0, 0.0, 3.0}};
    const FiniteRV y{{0.0, 3.0, 3.0}};
    const double gap = mad((x + y).law()) - mad(x.law()) - mad(y.law());
    if (!(std::fabs(gap + 2.0 / 3.0) <= 1e-12)) {
        note = describe_violation("additivity gap", gap, -2.0 / 3.0);
        return false;
    }
    return true;
}

// convex-order consistency fails for dq: a mean-preserving spread can hide
// all its dispersion outside the quantile window (all weights in 16ths so
// every cumulative comparison is exact in binary)
inline bool no_cx_consistency_dq(std::string& note) {
    std::vector<double> xa(16, 0.0), ya(16, 0.0);
    for (std::size_t i = 8; i < 16; ++i) xa[i] = 0.125;
    ya[15] = 1.0;
    const FiniteRV x{xa}, y{ya};  // equal means 1/16; X precedes Y in cx order
    const double p = 0.75;
    const double vx = delta_q(x.law(), p);
    const double vy = delta_q(y.law(), p);
    if (!(vx == 0.125 && vy == 0.0)) {
        note = describe_violation("cx violation values", vx, vy);
        return false;
    }
    return true;
}

// convexity fails for dq: blending two indicator variables puts an atom of
// weight 2/16 at 1/2, which the right quantile at 0.875 picks up
inline bool no_convexity_dq(std::string& note) {
    std::vector<double> xa(16, 0.0), ya(16, 0.0);
    xa[15] = 1.0;
    ya[14] = 1.0;
    const FiniteRV x{xa}, y{ya};
    const double p = 0.875;
    const double lhs = delta_q((0.5 * x + 0.5 * y).law(), p);
    const double rhs = 0.5 * delta_q(x.law(), p) + 0.5 * delta_q(y.law(), p);
    if (!(lhs == 0.5 && rhs == 0.0)) {
        note = describe_violation("convexity violation", lhs, rhs);
        return false;
    }
    return true;
}

// mixture concavity fails for dq: mixing a symmetric two-pointer into a
// point mass dilutes both tails below the quantile window
inline bool no_mixture_concavity_dq(std::string& note) {
    const DiscreteDistribution f({-1.0, 1.0}, {0.5, 0.5});
    const DiscreteDistribution h({0.0}, {1.0});
    const std::array<DiscreteDistribution, 2> laws = {f, h};
    const std::array<double, 2> w = {0.1, 0.9};
    const DiscreteDistribution mix = DiscreteDistribution::mixture(laws, w);
    const double p = 0.9;
    const double lhs = delta_q(mix, p);
    const double rhs = 0.1 * delta_q(f, p) + 0.9 * delta_q(h, p);
    if (!(lhs == 0.0 && std::fabs(rhs - 0.2) <= 1e-15)) {
        note = describe_violation("mixture concavity violation", lhs, rhs);
        return false;
    }
    return true;
}

// mixture concavity fails for dex; the exact rational values of the stored
// law pair certify it: -2531/1311 < -9524/5225
inline bool no_mixture_concavity_dex(std::string& note) {
    const DiscreteDistribution f({-1.0, 1.0}, {0.5, 0.5});
    const DiscreteDistribution h({0.0, 5.0}, {2.0 / 3.0, 1.0 / 3.0});
    const std::array<DiscreteDistribution, 2> laws = {f, h};
    const std::array<double, 2> w = {0.9, 0.1};
    const DiscreteDistribution mix = DiscreteDistribution::mixture(laws, w);
    const double p = 0.1;
    const double vf = delta_ex(f, p);
    const double vh = delta_ex(h, p);
    const double vm = delta_ex(mix, p);
    auto rel = [](double a, double b) { return std::fabs(a - b) / std::fabs(b); };
    if (rel(vf, -8.0 / 5.0) > 1e-12 || rel(vh, -800.0 / 209.0) > 1e-12 ||
        rel(vm, -2531.0 / 1311.0) > 1e-12) {
        note = describe_violation("exact rational fixture", vm, -2531.0 / 1311.0);
        return false;
    }
    const double avg = 0.9 * vf + 0.1 * vh;  // = -9524/5225
    if (!(vm < avg && std::fabs(avg + 9524.0 / 5225.0) <= 1e-12)) {
        note = describe_violation("mixture concavity violation", vm, avg);
        return false;
    }
    return true;
}

// mixture concavity fails for mad: two Bernoulli-type laws whose mixture
// halves the deviation (1/3 < 4/9)
inline bool no_mixture_concavity_mad(std::string& note) {
    const DiscreteDistribution f({0.0, 1.0}, {2.0 / 3.0, 1.0 / 3.0});
    const DiscreteDistribution h({-1.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0});
    const std::array<DiscreteDistribution, 2> laws = {f, h};
    const std::array<double, 2> w = {0.5, 0.5};
    const DiscreteDistribution mix = DiscreteDistribution::mixture(laws, w);
    const double lhs = mad(mix);
    const double rhs = 0.5 * mad(f) + 0.5 * mad(h);
    if (!(std::fabs(lhs - 1.0 / 3.0) <= 1e-12 && std::fabs(rhs - 4.0 / 9.0) <= 1e-12 &&
          lhs < rhs)) {
        note = describe_violation("mixture concavity violation", lhs, rhs);
        return false;
    }
    return true;
}

inline bool run_no_cell(PropertyKind pr, MeasureKind m, std::string& note) {
    if (pr == PropertyKind::relevance && m == MeasureKind::dq) return no_relevance_dq(note);
    if (pr == PropertyKind::c_additivity) {
        if (m == MeasureKind::dex) return no_c_additivity_dex(note);
        if (m == MeasureKind::variance) return no_c_additivity_variance(note);
        if (m == MeasureKind::std_dev) return no_c_additivity_std(note);
        if (m == MeasureKind::mad) return no_c_additivity_mad(note);
    }
    if (pr == PropertyKind::cx_consistency && m == MeasureKind::dq)
        return no_cx_consistency_dq(note);
    if (pr == PropertyKind::convexity && m == MeasureKind::dq) return no_convexity_dq(note);
    if (pr == PropertyKind::mixture_concavity) {
        if (m == MeasureKind::dq) return no_mixture_concavity_dq(note);
        if (m == MeasureKind::dex) return no_mixture_concavity_dex(note);
        if (m == MeasureKind::mad) return no_mixture_concavity_mad(note);
    }
    note = "no stored counterexample for this cell";
    return false;
}

inline bool run_yes_cell(PropertyKind pr, MeasureKind m, SplitMix64& g, int trials,
                         std::string& note) {
    switch (pr) {
        case PropertyKind::relevance: return trials_relevance(m, g, trials, note);
        case PropertyKind::continuity: return trials_continuity(m, g, trials, note);
        case PropertyKind::symmetry: return trials_symmetry(m, g, trials, note);
        case PropertyKind::c_additivity: return trials_c_additivity(m, g, trials, note);
        case PropertyKind::cx_consistency:
            return trials_cx_consistency(m, g, trials, note);
        case PropertyKind::convexity: return trials_convexity(m, g, trials, note);
        case PropertyKind::mixture_concavity:
            return trials_mixture_concavity(m, g, trials, note);
        case PropertyKind::location_invariance:
            return trials_location_invariance(m, g, trials, note);
        case PropertyKind::standardization:
            return trials_standardization(m, g, trials, note);
    }
    return false;
}

} // namespace detail

struct Table1Cell {
    bool expected_yes = true;
    bool passed = false;
    std::string note;
};

struct Table1Report {
    std::uint64_t seed = 0;
    int trials = 0;
    std::array<std::array<Table1Cell, table1_measures.size()>, table1_properties.size()>
        cells;

    bool all_pass() const {
        for (const auto& row : cells)
            for (const auto& c : row)
                if (!c.passed) return false;
        return true;
    }

    std::string render() const {
        std::ostringstream os;
        os << "                ";
        for (MeasureKind m : table1_measures) {
            std::string h = measure_label(m);
            os << h << std::string(7 - h.size(), ' ');
        }
        os << '\n';
        for (std::size_t pi = 0; pi < table1_properties.size(); ++pi) {
            std::string label = property_label(table1_properties[pi]);
            os << label << std::string(16 - label.size(), ' ');
            for (std::size_t mi = 0; mi < table1_measures.size(); ++mi) {
                const Table1Cell& c = cells[pi][mi];
                std::string cell = !c.passed ? "FAIL" : (c.expected_yes ? "yes" : "no*");
                os << cell << std::string(7 - cell.size(), ' ');
            }
            os << '\n';
        }
        os << "homogeneity degree: 2 for var, 1 otherwise; "
              "no* = failure certified by a stored counterexample\n";
        for (std::size_t pi = 0; pi < table1_properties.size(); ++pi)
            for (std::size_t mi = 0; mi < table1_measures.size(); ++mi)
                if (!cells[pi][mi].passed)
                    os << "FAIL " << property_label(table1_properties[pi]) << " x "
                       << measure_label(table1_measures[mi]) << ": " << cells[pi][mi].note
                       << '\n';
        return os.str();
    }
};

inline Table1Report run_table1(std::uint64_t seed, int trials = 200) {
    if (trials < 1) throw std::invalid_argument("run_table1: trials must be positive");
    Table1Report rep;
    rep.seed = seed;
    rep.trials = trials;
    for (std::size_t pi = 0; pi < table1_properties.size(); ++pi) {
        for (std::size_t mi = 0; mi < table1_measures.size(); ++mi) {
            const PropertyKind pr = table1_properties[pi];
            const MeasureKind m = table1_measures[mi];
            Table1Cell& cell = rep.cells[pi][mi];
            cell.expected_yes = table1_expected_yes(pr, m);
            SplitMix64 g = stream_for(seed, pi * 16 + mi);
            cell.passed = cell.expected_yes
                              ? detail::run_yes_cell(pr, m, g, trials, cell.note)
                              : detail::run_no_cell(pr, m, cell.note);
        }
    }
    return rep;
}

} // namespace varmetrics

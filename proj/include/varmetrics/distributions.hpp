#pragma once

// Probability layer: parametric families (normal, exponential, Student-t,
// Pareto) closed under location-scale maps, discrete laws with finitely many
// atoms, random variables on finite uniform sample spaces, and a parser for
// the textual distribution grammar used by the CLI.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "special_functions.hpp"

namespace varmetrics {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class Family { normal, exponential, student_t, pareto };

/// Continuous law: a standard core distribution composed with x = shift + scale*z.
/// normal(mu,sigma) is the standard normal core with shift mu, scale sigma;
/// exponential(rate) is the unit-rate core with scale 1/rate.
class ParametricDistribution {
public:
    static ParametricDistribution make_normal(double mu, double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("normal: sigma must be > 0");
        return {Family::normal, 0.0, mu, sigma};
    }
    static ParametricDistribution make_exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        return {Family::exponential, 0.0, 0.0, 1.0 / rate};
    }
    static ParametricDistribution make_student_t(double nu) {
        if (!(nu > 0.0)) throw std::invalid_argument("student_t: nu must be > 0");
        return {Family::student_t, nu, 0.0, 1.0};
    }
    static ParametricDistribution make_pareto(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("pareto: alpha must be > 0");
        return {Family::pareto, alpha, 0.0, 1.0};
    }
    static ParametricDistribution location_scale(const ParametricDistribution& base,
                                                 double shift, double scale) {
        if (!(scale > 0.0)) throw std::invalid_argument("location_scale: scale must be > 0");
        if (!std::isfinite(shift)) throw std::invalid_argument("location_scale: shift must be finite");
        return {base.family_, base.shape_, shift + scale * base.shift_, scale * base.scale_};
    }

    Family family() const { return family_; }
    double shape() const { return shape_; }    // nu for Student-t, alpha for Pareto
    double shift() const { return shift_; }
    double scale() const { return scale_; }

    double cdf(double x) const { return core_cdf((x - shift_) / scale_); }
    double pdf(double x) const { return core_pdf((x - shift_) / scale_) / scale_; }

    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("quantile: p must lie in (0,1)");
        return shift_ + scale_ * core_quantile(p);
    }

    /// Q(1-q) in the upper-tail coordinate. Equal to quantile(1-q) in exact
    /// arithmetic, but keeps full relative precision for tiny q, where 1-q
    /// would collapse onto a grid of doubles.
    double quantile_upper(double q) const {
        if (!(q > 0.0 && q < 1.0))
            throw std::domain_error("quantile_upper: q must lie in (0,1)");
        return shift_ + scale_ * core_quantile_upper(q);
    }

    double support_lower() const {
        switch (family_) {
            case Family::normal:
            case Family::student_t:  return -infinity;
            case Family::exponential: return shift_;
            case Family::pareto:      return shift_ + scale_;
        }
        return -infinity;
    }
    double support_upper() const { return infinity; }

    bool has_finite_mean() const {
        switch (family_) {
            case Family::normal:
            case Family::exponential: return true;
            case Family::student_t:   return shape_ > 1.0;
            case Family::pareto:      return shape_ > 1.0;
        }
        return false;
    }

    double mean() const {
        if (!has_finite_mean())
            throw std::domain_error("mean: distribution has no finite mean");
        return shift_ + scale_ * core_mean();
    }

    bool has_finite_variance() const {
        switch (family_) {
            case Family::normal:
            case Family::exponential: return true;
            case Family::student_t:   return shape_ > 2.0;
            case Family::pareto:      return shape_ > 2.0;
        }
        return false;
    }

    /// Exact variance; +infinity outside L^2.
    double variance() const {
        if (!has_finite_variance()) return infinity;
        double v = 1.0;
        switch (family_) {
            case Family::normal:
            case Family::exponential: v = 1.0; break;
            case Family::student_t:   v = shape_ / (shape_ - 2.0); break;
            case Family::pareto:
                v = shape_ / ((shape_ - 1.0) * (shape_ - 1.0) * (shape_ - 2.0));
                break;
        }
        return scale_ * scale_ * v;
    }

    /// P(X > x) with full relative precision in the upper tail, where
    /// 1 - cdf(x) would cancel.
    double survival(double x) const { return core_sf((x - shift_) / scale_); }

    /// E[(X - x)_+]; +infinity when X has no finite mean.
    double upper_partial_moment(double x) const {
        if (!has_finite_mean()) return infinity;
        return scale_ * core_upm((x - shift_) / scale_);
    }

    /// E[(x - X)_+]; +infinity when X has no finite mean. Computed directly
    /// rather than through E[(X-x)_+] + x - mean, which cancels
    /// catastrophically deep in the lower tail where this moment is tiny.
    double lower_partial_moment(double x) const {
        if (!has_finite_mean()) return infinity;
        return scale_ * core_lpm((x - shift_) / scale_);
    }

private:
    ParametricDistribution(Family f, double shape, double shift, double scale)
        : family_(f), shape_(shape), shift_(shift), scale_(scale) {}

    double core_cdf(double z) const {
        switch (family_) {
            case Family::normal:      return normal_cdf(z);
            case Family::exponential: return z <= 0.0 ? 0.0 : -std::expm1(-z);
            case Family::student_t:   return student_t_cdf(z, shape_);
            case Family::pareto:      return z <= 1.0 ? 0.0 : 1.0 - std::pow(z, -shape_);
        }
        return 0.0;
    }
    double core_pdf(double z) const {
        switch (family_) {
            case Family::normal:      return normal_pdf(z);
            case Family::exponential: return z < 0.0 ? 0.0 : std::exp(-z);
            case Family::student_t:   return student_t_pdf(z, shape_);
            case Family::pareto:      return z < 1.0 ? 0.0 : shape_ * std::pow(z, -shape_ - 1.0);
        }
        return 0.0;
    }
    // symmetric families reflect the cdf, which already resolves small tail
    // masses; the others have exact tail expressions
    double core_sf(double z) const {
        switch (family_) {
            case Family::normal:      return normal_cdf(-z);
            case Family::exponential: return z <= 0.0 ? 1.0 : std::exp(-z);
            case Family::student_t:   return student_t_cdf(-z, shape_);
            case Family::pareto:      return z <= 1.0 ? 1.0 : std::pow(z, -shape_);
        }
        return 0.0;
    }
    double core_quantile(double p) const {
        switch (family_) {
            case Family::normal:      return normal_quantile(p);
            case Family::exponential: return -std::log1p(-p);
            case Family::student_t:   return student_t_quantile(p, shape_);
            case Family::pareto:      return std::pow(1.0 - p, -1.0 / shape_);
        }
        return 0.0;
    }
    // Q(1-q) without forming 1-q: symmetry for normal and t, exact tail
    // expressions for the others.
    double core_quantile_upper(double q) const {
        switch (family_) {
            case Family::normal:      return -normal_quantile(q);
            case Family::exponential: return -std::log(q);
            case Family::student_t:   return -student_t_quantile(q, shape_);
            case Family::pareto:      return std::pow(q, -1.0 / shape_);
        }
        return 0.0;
    }
    double core_mean() const {
        switch (family_) {
            case Family::normal:      return 0.0;
            case Family::exponential: return 1.0;
            case Family::student_t:   return 0.0;
            case Family::pareto:      return shape_ / (shape_ - 1.0);
        }
        return 0.0;
    }
    double core_upm(double z) const {
        switch (family_) {
            case Family::normal:
                return normal_pdf(z) - z * core_sf(z);
            case Family::exponential:
                return z < 0.0 ? 1.0 - z : std::exp(-z);
            case Family::student_t: {
                const double z2 = z * z;
                // past here z*z overflows and the density is long dead
                if (z2 > 1e300) return z > 0.0 ? 0.0 : -z;
                return student_t_pdf(z, shape_) * (shape_ + z2) / (shape_ - 1.0) -
                       z * core_sf(z);
            }
            case Family::pareto:
                if (z <= 1.0) return core_mean() - z;
                return std::pow(z, 1.0 - shape_) / (shape_ - 1.0);
        }
        return 0.0;
    }
    double core_lpm(double z) const {
        switch (family_) {
            case Family::normal:      return core_upm(-z);   // symmetry
            case Family::student_t:   return core_upm(-z);   // symmetry
            case Family::exponential: return z <= 0.0 ? 0.0 : z + std::expm1(-z);
            case Family::pareto:
                return z <= 1.0 ? 0.0 : z - core_mean() + core_upm(z);
        }
        return 0.0;
    }

    Family family_;
    double shape_;
    double shift_;
    double scale_;
};

/// Law with finitely many atoms: strictly increasing support, positive
/// weights summing to 1 within 1e-12.
class DiscreteDistribution {
public:
    DiscreteDistribution(std::vector<double> support, std::vector<double> probs)
        : support_(std::move(support)), probs_(std::move(probs)) {
        if (support_.empty() || support_.size() != probs_.size())
            throw std::invalid_argument("discrete: support and weights must be non-empty and equal-sized");
        double sum = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            if (!std::isfinite(support_[i]))
                throw std::invalid_argument("discrete: support values must be finite");
            if (i > 0 && !(support_[i] > support_[i - 1]))
                throw std::invalid_argument("discrete: support must be strictly increasing");
            if (!(probs_[i] > 0.0))
                throw std::invalid_argument("discrete: weights must be positive");
            sum += probs_[i];
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("discrete: weights must sum to 1 within 1e-12");
        cum_.resize(probs_.size());
        double c = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            c += probs_[i];
            cum_[i] = c;
        }
    }

    std::size_t size() const { return support_.size(); }
    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }
    const std::vector<double>& cumulative() const { return cum_; }

    double min() const { return support_.front(); }
    double max() const { return support_.back(); }

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) m += probs_[i] * support_[i];
        return m;
    }

    double cdf(double x) const {
        double c = 0.0;
        for (std::size_t i = 0; i < support_.size() && support_[i] <= x; ++i) c = cum_[i];
        return c;
    }

    /// Law of -X.
    DiscreteDistribution negate() const {
        std::vector<double> s(support_.rbegin(), support_.rend());
        for (double& v : s) v = -v;
        std::vector<double> p(probs_.rbegin(), probs_.rend());
        return {std::move(s), std::move(p)};
    }

    /// Weighted mixture of laws: the union of supports, equal atoms merged.
    static DiscreteDistribution mixture(std::span<const DiscreteDistribution> laws,
                                        std::span<const double> weights) {
        if (laws.empty() || laws.size() != weights.size())
            throw std::invalid_argument("mixture: need matching non-empty laws and weights");
        double wsum = 0.0;
        for (double w : weights) {
            if (!(w > 0.0)) throw std::invalid_argument("mixture: weights must be positive");
            wsum += w;
        }
        if (std::fabs(wsum - 1.0) > 1e-12)
            throw std::invalid_argument("mixture: weights must sum to 1 within 1e-12");
        std::map<double, double> acc;
        for (std::size_t k = 0; k < laws.size(); ++k)
            for (std::size_t i = 0; i < laws[k].size(); ++i)
                acc[laws[k].support()[i]] += weights[k] * laws[k].probs()[i];
        std::vector<double> s, p;
        s.reserve(acc.size());
        p.reserve(acc.size());
        for (auto& [v, w] : acc) {
            s.push_back(v);
            p.push_back(w);
        }
        return {std::move(s), std::move(p)};
    }

private:
    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cum_;
};

/// Random variable on a finite uniform sample space: atom i is the value on
/// outcome i, each outcome carrying probability 1/n. Arithmetic is pointwise,
/// which is what makes comonotonic and convex-order constructions exact.
class FiniteRV {
public:
    explicit FiniteRV(std::vector<double> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw std::invalid_argument("FiniteRV: needs at least one atom");
        for (double a : atoms_)
            if (!std::isfinite(a)) throw std::invalid_argument("FiniteRV: atoms must be finite");
        sorted_ = atoms_;
        std::sort(sorted_.begin(), sorted_.end());
    }

    std::size_t size() const { return atoms_.size(); }
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& sorted() const { return sorted_; }

    /// Distribution of the atoms; exactly equal values are merged.
    DiscreteDistribution law() const {
        std::vector<double> s, p;
        const double w = 1.0 / static_cast<double>(atoms_.size());
        std::size_t i = 0;
        while (i < sorted_.size()) {
            std::size_t j = i;
            while (j < sorted_.size() && sorted_[j] == sorted_[i]) ++j;
            s.push_back(sorted_[i]);
            p.push_back(w * static_cast<double>(j - i));
            i = j;
        }
        if (s.size() == 1) p[0] = 1.0;
        return {std::move(s), std::move(p)};
    }

    FiniteRV truncated(double m) const {
        std::vector<double> a = atoms_;
        for (double& v : a) v = std::clamp(v, -m, m);
        return FiniteRV{std::move(a)};
    }

private:
    std::vector<double> atoms_;
    std::vector<double> sorted_;
};

inline FiniteRV operator+(const FiniteRV& x, const FiniteRV& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("FiniteRV: sample spaces differ in size");
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.atoms()[i] + y.atoms()[i];
    return FiniteRV{std::move(a)};
}

inline FiniteRV operator+(const FiniteRV& x, double c) {
    std::vector<double> a = x.atoms();
    for (double& v : a) v += c;
    return FiniteRV{std::move(a)};
}

inline FiniteRV operator*(double lambda, const FiniteRV& x) {
    std::vector<double> a = x.atoms();
    for (double& v : a) v *= lambda;
    return FiniteRV{std::move(a)};
}

inline FiniteRV operator-(const FiniteRV& x) { return -1.0 * x; }

using AnyDistribution = std::variant<ParametricDistribution, DiscreteDistribution>;

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& tok, const char* what) {
    std::string t = strip(tok);
    if (t.empty()) throw std::invalid_argument(std::string("distribution spec: empty ") + what);
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("distribution spec: bad ") + what + " '" + t + "'");
    }
    if (pos != t.size())
        throw std::invalid_argument(std::string("distribution spec: bad ") + what + " '" + t + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

/// Parse the textual grammar
///   normal(mu,sigma) | exp(rate) | t(nu) | pareto(alpha) | discrete(v1:p1,...)
inline AnyDistribution parse_distribution(const std::string& text) {
    std::string s = detail::strip(text);
    std::size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw std::invalid_argument("distribution spec: expected name(arguments)");
    std::string name = detail::strip(s.substr(0, open));
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    std::string body = s.substr(open + 1, s.size() - open - 2);
    auto args = detail::split(body, ',');

    if (name == "normal") {
        if (args.size() != 2) throw std::invalid_argument("normal takes (mu,sigma)");
        return ParametricDistribution::make_normal(detail::parse_number(args[0], "mu"),
                                                   detail::parse_number(args[1], "sigma"));
    }
    if (name == "exp" || name == "exponential") {
        if (args.size() != 1) throw std::invalid_argument("exp takes (rate)");
        return ParametricDistribution::make_exponential(detail::parse_number(args[0], "rate"));
    }
    if (name == "t" || name == "student_t") {
        if (args.size() != 1) throw std::invalid_argument("t takes (nu)");
        return ParametricDistribution::make_student_t(detail::parse_number(args[0], "nu"));
    }
    if (name == "pareto") {
        if (args.size() != 1) throw std::invalid_argument("pareto takes (alpha)");
        return ParametricDistribution::make_pareto(detail::parse_number(args[0], "alpha"));
    }
    if (name == "discrete") {
        std::vector<double> sup, pr;
        for (const auto& a : args) {
            auto parts = detail::split(a, ':');
            if (parts.size() != 2)
                throw std::invalid_argument("discrete atoms must be value:weight");
            sup.push_back(detail::parse_number(parts[0], "atom value"));
            pr.push_back(detail::parse_number(parts[1], "atom weight"));
        }
        return DiscreteDistribution{std::move(sup), std::move(pr)};
    }
    throw std::invalid_argument("distribution spec: unknown family '" + name + "'");
}

} // namespace varmetrics

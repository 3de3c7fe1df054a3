#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>
#include <varmetrics/sample_stats.hpp>

using namespace varmetrics;

namespace {
const std::vector<double> one_to_ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

TEST_CASE("sample quantiles follow the index conventions", "[sample]") {
    // right quantile: order statistic floor(np)+1, one-based
    CHECK(sample_quantile_right(one_to_ten, 0.9) == 10.0);
    CHECK(sample_quantile_right(one_to_ten, 0.85) == 9.0);
    CHECK(sample_quantile_right(one_to_ten, 0.0) == 1.0);
    CHECK(sample_quantile_right(one_to_ten, 0.999) == 10.0);

    // left quantile: order statistic ceil(np), one-based
    CHECK(sample_quantile_left(one_to_ten, 0.9) == 9.0);
    CHECK(sample_quantile_left(one_to_ten, 0.85) == 9.0);
    CHECK(sample_quantile_left(one_to_ten, 1.0) == 10.0);

    // they differ exactly on the lattice p = k/n
    CHECK(sample_quantile_right(one_to_ten, 0.5) == 6.0);
    CHECK(sample_quantile_left(one_to_ten, 0.5) == 5.0);
}

TEST_CASE("sample es averages the upper tail with the boundary sliver", "[sample]") {
    // p = 0.9: (1/0.1) * (a_10 * 0.1) = 10
    CHECK(sample_es(one_to_ten, 0.9) == Catch::Approx(10.0).epsilon(1e-14));
    // p = 0.85: (a_9 * (0.9 - 0.85) + a_10 * 0.1) / 0.15 = (0.45 + 1.0) / 0.15
    CHECK(sample_es(one_to_ten, 0.85) == Catch::Approx(1.45 / 0.15).epsilon(1e-14));
    // p = 0 averages everything
    CHECK(sample_es(one_to_ten, 0.0) == Catch::Approx(5.5).epsilon(1e-14));

    CHECK(sample_es_left(one_to_ten, 0.1) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(sample_es_left(one_to_ten, 0.15) ==
          Catch::Approx((1.0 * 0.1 + 2.0 * 0.05) / 0.15).epsilon(1e-14));
    CHECK(sample_es_left(one_to_ten, 1.0) == Catch::Approx(5.5).epsilon(1e-14));

    // mean identity: p es_left + (1-p) es + boundary sliver = mean
    for (double p : {0.25, 0.5, 0.85}) {
        const double lhs = p * sample_es_left(one_to_ten, p) +
                           (1.0 - p) * sample_es(one_to_ten, p);
        // the two tail averages overlap only on the straddling order statistic
        CHECK(lhs == Catch::Approx(5.5).epsilon(1e-12));
    }
}

TEST_CASE("sample expectile solves the asymmetric first order condition", "[sample]") {
    // exact rational: expectile of {1..10} at p = 0.9 is 271/34
    CHECK(sample_expectile(one_to_ten, 0.9) == Catch::Approx(271.0 / 34.0).epsilon(1e-13));
    // p = 1/2 is the mean
    CHECK(sample_expectile(one_to_ten, 0.5) == Catch::Approx(5.5).epsilon(1e-13));
    // monotone in p
    CHECK(sample_expectile(one_to_ten, 0.3) < sample_expectile(one_to_ten, 0.7));

    // first order condition holds at the returned point
    const double p = 0.73;
    const double x = sample_expectile(one_to_ten, p);
    double up = 0.0, dn = 0.0;
    for (double v : one_to_ten) {
        up += std::max(v - x, 0.0);
        dn += std::max(x - v, 0.0);
    }
    CHECK(p * up == Catch::Approx((1.0 - p) * dn).epsilon(1e-12));
}

TEST_CASE("sample variability differences", "[sample]") {
    CHECK(sample_delta_q(one_to_ten, 0.9) == 10.0 - 1.0);
    CHECK(sample_delta_es(one_to_ten, 0.9) == Catch::Approx(9.0).epsilon(1e-13));
    // exact rational: 271/34 - mirrored value = 84/17
    CHECK(sample_delta_ex(one_to_ten, 0.9) == Catch::Approx(84.0 / 17.0).epsilon(1e-13));
    CHECK(sample_range(one_to_ten) == 9.0);
}

TEST_CASE("sample moments", "[sample]") {
    CHECK(sample_mean(one_to_ten) == Catch::Approx(5.5).epsilon(1e-14));
    // unbiased variance of 1..10: sum of squared deviations 82.5 over n-1 = 9
    CHECK(sample_variance(one_to_ten) == Catch::Approx(82.5 / 9.0).epsilon(1e-14));
}

TEST_CASE("sample estimators reject empty input and bad levels", "[sample]") {
    const std::vector<double> empty;
    CHECK_THROWS_AS(sample_quantile_right(empty, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sample_es(empty, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sample_quantile_right(one_to_ten, -0.1), std::domain_error);
    CHECK_THROWS_AS(sample_quantile_right(one_to_ten, 1.0), std::domain_error);
    CHECK_THROWS_AS(sample_quantile_left(one_to_ten, 0.0), std::domain_error);
    CHECK_THROWS_AS(sample_expectile(one_to_ten, 0.0), std::domain_error);
    CHECK_THROWS_AS(sample_expectile(one_to_ten, 1.0), std::domain_error);
    const std::vector<double> lone{1.0};
    CHECK_THROWS_AS(sample_variance(lone), std::invalid_argument);
}

TEST_CASE("single observation degenerates cleanly", "[sample]") {
    const std::vector<double> one{3.5};
    CHECK(sample_quantile_right(one, 0.9) == 3.5);
    CHECK(sample_es(one, 0.37) == Catch::Approx(3.5).epsilon(1e-14));
    CHECK(sample_expectile(one, 0.9) == Catch::Approx(3.5).epsilon(1e-12));
    CHECK(sample_delta_q(one, 0.9) == 0.0);
    CHECK(sample_range(one) == 0.0);
}

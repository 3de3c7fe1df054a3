#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>
#include <varmetrics/calibration.hpp>

using namespace varmetrics;

namespace {
const ParametricDistribution stdnorm = make_normal(0.0, 1.0);
}

TEST_CASE("matched levels for the normal", "[calibration]") {
    const LevelTriple a = match_levels(stdnorm, 0.9);
    CHECK(a.p == 0.9);
    CHECK(a.q == Catch::Approx(0.754350784772).margin(1e-6));
    CHECK(a.r == Catch::Approx(0.965599570527).margin(1e-6));

    const LevelTriple b = match_levels(stdnorm, 0.95);
    CHECK(b.q == Catch::Approx(0.874502076741).margin(1e-6));
    CHECK(b.r == Catch::Approx(0.987612670953).margin(1e-6));

    const LevelTriple c = match_levels(stdnorm, 0.99);
    CHECK(c.q == Catch::Approx(0.974232034642).margin(1e-6));
    CHECK(c.r == Catch::Approx(0.998547586104).margin(1e-6));
}

TEST_CASE("matched levels equalize the three measures", "[calibration]") {
    for (const auto& d :
         {stdnorm, make_exponential(1.0), make_student_t(4.0), make_pareto(4.0)}) {
        for (double p : {0.8, 0.9, 0.975}) {
            const LevelTriple t = match_levels(d, p);
            const double target = delta_q(d, p);
            CHECK(delta_es(d, t.q) == Catch::Approx(target).epsilon(1e-8));
            CHECK(delta_ex(d, t.r) == Catch::Approx(target).epsilon(1e-8));
            // tail averaging reaches a given spread earlier, expectiles later
            CHECK(t.q < p);
            CHECK(t.r > p);
        }
    }
}

TEST_CASE("matched levels for heavy tails", "[calibration]") {
    const LevelTriple t4 = match_levels(make_student_t(4.0), 0.9);
    CHECK(t4.q == Catch::Approx(0.715979810177).margin(1e-6));
    CHECK(t4.r == Catch::Approx(0.944038721451).margin(1e-6));

    const LevelTriple t10 = match_levels(make_student_t(10.0), 0.9);
    CHECK(t10.q == Catch::Approx(0.741832645886).margin(1e-6));
    CHECK(t10.r == Catch::Approx(0.958744024753).margin(1e-6));

    // heavier tails pull q further down and r further down too
    CHECK(t4.q < t10.q);
    CHECK(t10.q < 0.754351);
}

TEST_CASE("the exponential matched level shows the tail inflation factor", "[calibration]") {
    const LevelTriple t = match_levels(make_exponential(1.0), 0.99);
    CHECK(t.q == Catch::Approx(0.972915296276).margin(1e-6));
    // (1-q)/(1-p) approaches e for small tails
    const double ratio = (1.0 - t.q) / (1.0 - t.p);
    CHECK(std::fabs(ratio / std::exp(1.0) - 1.0) < 0.01);
}

TEST_CASE("matched levels ignore location and scale", "[calibration]") {
    const ParametricDistribution base = make_student_t(4.0);
    const ParametricDistribution moved = location_scale(base, 3.0, 2.0);
    const LevelTriple a = match_levels(base, 0.9);
    const LevelTriple b = match_levels(moved, 0.9);
    CHECK(a.q == Catch::Approx(b.q).margin(1e-9));
    CHECK(a.r == Catch::Approx(b.r).margin(1e-9));
}

TEST_CASE("calibration curves are monotone in p", "[calibration]") {
    const std::vector<double> grid{0.8, 0.85, 0.9, 0.95, 0.99};
    const auto curve = calibration_curve(stdnorm, grid);
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 0; i < curve.size(); ++i) CHECK(curve[i].p == grid[i]);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].q > curve[i - 1].q);
        CHECK(curve[i].r > curve[i - 1].r);
    }
}

TEST_CASE("benchmark triples", "[calibration]") {
    const auto thumb = rule_of_thumb();
    CHECK(thumb[0].p == 0.9);
    CHECK(thumb[0].q == 0.75);
    CHECK(thumb[0].r == 0.97);
    CHECK(thumb[1].p == 0.95);
    CHECK(thumb[1].q == 0.875);
    CHECK(thumb[1].r == 0.99);
    CHECK(thumb[2].p == 0.99);
    CHECK(thumb[2].q == 0.97);
    CHECK(thumb[2].r == 0.999);

    // the normal matched levels sit within a percent or so of the benchmarks
    for (const auto& row : thumb) {
        const LevelTriple t = match_levels(stdnorm, row.p);
        CHECK(std::fabs(t.q - row.q) < 0.01);
        CHECK(std::fabs(t.r - row.r) < 0.005);
    }
}

TEST_CASE("level matching rejects unusable inputs", "[calibration]") {
    CHECK_THROWS_AS(match_levels(stdnorm, 0.5), std::domain_error);
    CHECK_THROWS_AS(match_levels(stdnorm, 1.0), std::domain_error);
    CHECK_THROWS_AS(match_levels(make_pareto(1.0), 0.9), std::domain_error);
    const AnyDistribution atom = DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS_AS(match_levels(atom, 0.9), std::domain_error);
    const std::vector<double> grid{0.9};
    CHECK_THROWS_AS(calibration_curve(atom, grid), std::domain_error);
}

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <varmetrics/marketdata.hpp>

using namespace varmetrics;

namespace {

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("log losses flip the sign of log returns", "[marketdata]") {
    PriceSeries ps;
    ps.dates = {"2020-01-01", "2020-01-02", "2020-01-03"};
    ps.closes = {100.0, 90.0, 99.0};
    const LossSeries ls = to_log_losses(ps);
    REQUIRE(ls.losses.size() == 2);
    CHECK(ls.dates[0] == "2020-01-02");
    CHECK(ls.dates[1] == "2020-01-03");
    CHECK(ls.losses[0] == Catch::Approx(-std::log(0.9)).epsilon(1e-14));
    CHECK(ls.losses[1] == Catch::Approx(-std::log(1.1)).epsilon(1e-14));

    PriceSeries one;
    one.dates = {"2020-01-01"};
    one.closes = {100.0};
    CHECK_THROWS_AS(to_log_losses(one), std::invalid_argument);
}

TEST_CASE("price files are validated row by row", "[marketdata]") {
    const TempFile good("md_prices_good.csv");
    write_file(good.path, "date,close\n2020-01-01,100\n2020-01-02,101.5\n2020-01-03,99\n");
    const PriceSeries ps = load_prices(good.path);
    REQUIRE(ps.closes.size() == 3);
    CHECK(ps.closes[1] == 101.5);
    CHECK(ps.dates[2] == "2020-01-03");

    const TempFile bad_header("md_prices_h.csv");
    write_file(bad_header.path, "timestamp,px\n2020-01-01,100\n");
    CHECK_THROWS_AS(load_prices(bad_header.path), std::runtime_error);

    const TempFile bad_price("md_prices_p.csv");
    write_file(bad_price.path, "date,close\n2020-01-01,100\n2020-01-02,-4\n2020-01-03,99\n");
    CHECK_THROWS_WITH(load_prices(bad_price.path),
                      Catch::Matchers::ContainsSubstring("row 3"));

    const TempFile bad_date("md_prices_d.csv");
    write_file(bad_date.path, "date,close\n2020-01-01,100\n2020-13-40,99\n");
    CHECK_THROWS_WITH(load_prices(bad_date.path),
                      Catch::Matchers::ContainsSubstring("row 3"));

    const TempFile unsorted("md_prices_u.csv");
    write_file(unsorted.path, "date,close\n2020-01-05,100\n2020-01-02,99\n");
    CHECK_THROWS_WITH(load_prices(unsorted.path),
                      Catch::Matchers::ContainsSubstring("strictly increasing"));

    const TempFile short_file("md_prices_s.csv");
    write_file(short_file.path, "date,close\n2020-01-01,100\n");
    CHECK_THROWS_AS(load_prices(short_file.path), std::runtime_error);

    const TempFile extra_col("md_prices_c.csv");
    write_file(extra_col.path, "date,close\n2020-01-01,100,7\n2020-01-02,99\n");
    CHECK_THROWS_WITH(load_prices(extra_col.path),
                      Catch::Matchers::ContainsSubstring("row 2"));

    CHECK_THROWS_AS(load_prices("definitely_missing_prices.csv"), std::runtime_error);
}

TEST_CASE("rolling windows are dated at their last observation", "[marketdata]") {
    const LossSeries ls = synth_losses(make_student_t(4.0), 300, 11);
    RollingConfig cfg;
    cfg.window = 253;
    const auto rows = rolling_ratios(ls, cfg);
    REQUIRE(rows.size() == 300 - 253 + 1);
    CHECK(rows.front().date == ls.dates[252]);
    CHECK(rows.back().date == ls.dates[299]);
    for (const auto& r : rows) {
        REQUIRE(r.ratio_es_q.has_value());
        REQUIRE(r.ratio_es_ex.has_value());
        // tail averaging spreads wider than quantiles but narrower than the
        // matched expectile level would need
        CHECK(*r.ratio_es_q > 0.0);
        CHECK(*r.ratio_es_ex > 0.0);
    }
}

TEST_CASE("rolling ratios ignore location and scale of the losses", "[marketdata]") {
    const LossSeries base = synth_losses(make_normal(0.0, 0.01), 80, 5);
    LossSeries moved = base;
    for (auto& v : moved.losses) v = 3.0 * v + 0.02;
    RollingConfig cfg;
    cfg.window = 60;
    const auto a = rolling_ratios(base, cfg);
    const auto b = rolling_ratios(moved, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].ratio_es_q.has_value());
        REQUIRE(b[i].ratio_es_q.has_value());
        CHECK(*a[i].ratio_es_q == Catch::Approx(*b[i].ratio_es_q).epsilon(1e-10));
        CHECK(*a[i].ratio_es_ex == Catch::Approx(*b[i].ratio_es_ex).epsilon(1e-10));
    }
}

TEST_CASE("degenerate windows yield no ratios", "[marketdata]") {
    LossSeries flat;
    for (int i = 0; i < 10; ++i) {
        flat.dates.push_back("2020-01-0" + std::to_string(i < 9 ? i + 1 : 9));
        flat.losses.push_back(0.5);
    }
    flat.dates[9] = "2020-01-10";
    RollingConfig cfg;
    cfg.window = 5;
    const auto rows = rolling_ratios(flat, cfg);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        CHECK_FALSE(r.ratio_es_q.has_value());
        CHECK_FALSE(r.ratio_es_ex.has_value());
    }
}

TEST_CASE("rolling configuration is validated", "[marketdata]") {
    const LossSeries ls = synth_losses(make_normal(0.0, 1.0), 40, 1);
    RollingConfig cfg;
    cfg.window = 1;
    CHECK_THROWS_AS(rolling_ratios(ls, cfg), std::invalid_argument);
    cfg.window = 10;
    cfg.p = 0.4;
    CHECK_THROWS_AS(rolling_ratios(ls, cfg), std::invalid_argument);
    cfg.p = 0.95;
    cfg.q = 0.0;
    CHECK_THROWS_AS(rolling_ratios(ls, cfg), std::invalid_argument);
    cfg.q = 0.875;
    cfg.r = 0.5;
    CHECK_THROWS_AS(rolling_ratios(ls, cfg), std::invalid_argument);
    cfg.r = 0.99;
    cfg.window = 100;  // longer than the series
    CHECK_THROWS_AS(rolling_ratios(ls, cfg), std::invalid_argument);
}

TEST_CASE("ratio files round trip including missing entries", "[marketdata]") {
    std::vector<RatioRow> rows(3);
    rows[0].date = "2020-01-01";
    rows[0].ratio_es_q = 1.25;
    rows[0].ratio_es_ex = 0.75;
    rows[1].date = "2020-01-02";  // both missing
    rows[2].date = "2020-01-03";
    rows[2].ratio_es_q = 1.0000000000000002;

    const TempFile f("md_ratios_roundtrip.csv");
    export_ratios(rows, f.path);
    const auto back = read_ratios(f.path);
    REQUIRE(back.size() == 3);
    CHECK(back[0].date == "2020-01-01");
    CHECK(*back[0].ratio_es_q == 1.25);
    CHECK(*back[0].ratio_es_ex == 0.75);
    CHECK_FALSE(back[1].ratio_es_q.has_value());
    CHECK_FALSE(back[1].ratio_es_ex.has_value());
    CHECK(*back[2].ratio_es_q == 1.0000000000000002);  // full precision survives
    CHECK_FALSE(back[2].ratio_es_ex.has_value());

    CHECK_THROWS_AS(read_ratios("definitely_missing_ratios.csv"), std::runtime_error);
    const TempFile bad("md_ratios_bad.csv");
    write_file(bad.path, "wrong,header,here\n");
    CHECK_THROWS_AS(read_ratios(bad.path), std::runtime_error);
}

TEST_CASE("loss files round trip at full precision", "[marketdata]") {
    const LossSeries ls = synth_losses(make_student_t(4.0), 25, 77);
    const TempFile f("md_losses_roundtrip.csv");
    write_losses(ls, f.path);
    const LossSeries back = read_losses(f.path);
    REQUIRE(back.losses.size() == 25);
    for (std::size_t i = 0; i < 25; ++i) {
        CHECK(back.dates[i] == ls.dates[i]);
        CHECK(back.losses[i] == ls.losses[i]);
    }

    const TempFile bad_order("md_losses_o.csv");
    write_file(bad_order.path, "date,loss\n2020-01-05,0.5\n2020-01-02,0.25\n");
    CHECK_THROWS_WITH(read_losses(bad_order.path),
                      Catch::Matchers::ContainsSubstring("strictly increasing"));
    const TempFile bad_num("md_losses_n.csv");
    write_file(bad_num.path, "date,loss\n2020-01-05,0.5\n2020-01-06,zebra\n");
    CHECK_THROWS_WITH(read_losses(bad_num.path),
                      Catch::Matchers::ContainsSubstring("row 3"));
}

TEST_CASE("synthetic losses are reproducible and dated consecutively", "[marketdata]") {
    const LossSeries a = synth_losses(make_exponential(2.0), 70, 42);
    const LossSeries b = synth_losses(make_exponential(2.0), 70, 42);
    CHECK(a.losses == b.losses);
    const LossSeries c = synth_losses(make_exponential(2.0), 70, 43);
    CHECK(a.losses != c.losses);

    CHECK(a.dates[0] == "2000-01-03");
    CHECK(a.dates[1] == "2000-01-04");
    CHECK(a.dates[29] == "2000-02-01");
    CHECK(a.dates[57] == "2000-02-29");  // leap day
    CHECK(a.dates[60] == "2000-03-03");

    CHECK_THROWS_AS(synth_losses(make_exponential(2.0), 0, 1), std::invalid_argument);
}

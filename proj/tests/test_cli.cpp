#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>
#include <varmetrics/cli.hpp>

using namespace varmetrics;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult call(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"varmetrics"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) parts.push_back(tok);
    return parts;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("measure prints a plain value on success", "[cli]") {
    const CliResult r = call({"measure", "--dist", "discrete(-1:0.5,1:0.5)", "--measure",
                              "dex", "--p", "0.9"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out == "1.6\n");
}

TEST_CASE("measure honors the precision option", "[cli]") {
    const CliResult r = call({"measure", "--dist", "normal(0,1)", "--measure", "dq",
                              "--p", "0.95", "--precision", "17"});
    REQUIRE(r.code == 0);
    CHECK(std::stod(r.out) == Catch::Approx(3.2897072539029444).epsilon(1e-15));

    const CliResult d = call({"measure", "--dist", "normal(0,1)", "--measure", "dq",
                              "--p", "0.95"});
    REQUIRE(d.code == 0);
    CHECK(std::stod(d.out) == Catch::Approx(3.2897072539).margin(1e-9));

    const CliResult bad = call({"measure", "--dist", "normal(0,1)", "--measure", "dq",
                                "--p", "0.95", "--precision", "18"});
    CHECK(bad.code == 2);
}

TEST_CASE("json and csv values are numerically identical", "[cli]") {
    const CliResult csv = call({"measure", "--dist", "t(4)", "--measure", "es", "--p",
                                "0.9", "--precision", "12"});
    const CliResult js = call({"measure", "--dist", "t(4)", "--measure", "es", "--p",
                               "0.9", "--precision", "12", "--json"});
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    const nlohmann::json j = nlohmann::json::parse(js.out);
    CHECK(j.at("measure") == "es");
    CHECK(j.at("p").get<double>() == 0.9);
    CHECK(j.at("value").get<double>() == std::stod(csv.out));
}

TEST_CASE("measures without a level work and level misuse is a usage error", "[cli]") {
    const CliResult r = call({"measure", "--dist", "discrete(0:0.5,2:0.5)", "--measure",
                              "range"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == 2.0);

    const CliResult missing =
        call({"measure", "--dist", "normal(0,1)", "--measure", "dq"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--p is required") != std::string::npos);

    const CliResult unknown =
        call({"measure", "--dist", "normal(0,1)", "--measure", "nope", "--p", "0.9"});
    CHECK(unknown.code == 2);
}

TEST_CASE("domain failures exit with one", "[cli]") {
    // relative deviation needs nonnegative support
    const CliResult r =
        call({"measure", "--dist", "normal(0,1)", "--measure", "reldev"});
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);

    const CliResult bad_dist =
        call({"measure", "--dist", "cauchy(0,1)", "--measure", "var", "--p", "0.9"});
    CHECK(bad_dist.code == 1);

    const CliResult bad_level =
        call({"measure", "--dist", "normal(0,1)", "--measure", "dq", "--p", "0.3"});
    CHECK(bad_level.code == 1);
}

TEST_CASE("asymvar emits the variance report", "[cli]") {
    const CliResult r =
        call({"asymvar", "--dist", "normal(0,1)", "--estimator", "dq", "--p", "0.9"});
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "sigma_sq,method,est_abs_error");
    const auto fields = split(lines[1], ',');
    REQUIRE(fields.size() == 3);
    CHECK(std::stod(fields[0]) == Catch::Approx(5.1948617798227414).epsilon(1e-9));
    CHECK(fields[1] == "closed_form");
    CHECK(std::stod(fields[2]) == 0.0);

    const CliResult j = call({"asymvar", "--dist", "exp(1)", "--estimator", "des", "--p",
                              "0.9", "--json"});
    REQUIRE(j.code == 0);
    const nlohmann::json obj = nlohmann::json::parse(j.out);
    CHECK(obj.at("method") == "quadrature");
    CHECK(obj.at("sigma_sq").get<double>() ==
          Catch::Approx(18.92789686843474).epsilon(1e-6));
    CHECK(obj.at("est_abs_error").get<double>() > 0.0);

    const CliResult atom = call({"asymvar", "--dist", "discrete(0:0.5,1:0.5)",
                                 "--estimator", "dq", "--p", "0.9"});
    CHECK(atom.code == 1);
}

TEST_CASE("simulate reports the error summary and writes histograms", "[cli]") {
    const TempFile hist("cli_sim_hist.csv");
    const CliResult r = call({"simulate", "--dist", "normal(0,1)", "--estimator", "dq",
                              "--p", "0.9", "--n", "200", "--reps", "30", "--seed", "5",
                              "--out", hist.path.c_str(), "--json"});
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("true_value").get<double>() == Catch::Approx(2.5631031310892009).epsilon(1e-9));
    CHECK(j.at("sigma_sq").get<double>() == Catch::Approx(5.1948617798227414).epsilon(1e-9));
    CHECK(j.contains("mean_e"));
    CHECK(j.contains("var_e"));
    CHECK(j.at("ks_distance").get<double>() > 0.0);
    const auto rows = read_histogram(hist.path);
    CHECK(rows.size() == 60);
}

TEST_CASE("calibrate matches one level or a grid but not both", "[cli]") {
    const CliResult one =
        call({"calibrate", "--dist", "normal(0,1)", "--p", "0.9", "--json"});
    REQUIRE(one.code == 0);
    const nlohmann::json j = nlohmann::json::parse(one.out);
    CHECK(j.at("q").get<double>() == Catch::Approx(0.754350784772).margin(1e-6));
    CHECK(j.at("r").get<double>() == Catch::Approx(0.965599570527).margin(1e-6));

    const CliResult grid =
        call({"calibrate", "--dist", "normal(0,1)", "--grid", "0.8:0.9:0.05"});
    REQUIRE(grid.code == 0);
    const auto lines = split(grid.out, '\n');
    REQUIRE(lines.size() >= 4);
    CHECK(lines[0] == "p,q,r");
    CHECK(split(lines[1], ',')[0] == "0.8");
    CHECK(split(lines[3], ',')[0] == "0.9");

    const CliResult both = call({"calibrate", "--dist", "normal(0,1)", "--p", "0.9",
                                 "--grid", "0.8:0.9:0.05"});
    CHECK(both.code == 2);
    const CliResult neither = call({"calibrate", "--dist", "normal(0,1)"});
    CHECK(neither.code == 2);
    const CliResult bad_grid =
        call({"calibrate", "--dist", "normal(0,1)", "--grid", "0.9:0.8:0.05"});
    CHECK(bad_grid.code == 2);
}

TEST_CASE("rolling consumes prices or losses and keeps window labels", "[cli]") {
    const TempFile losses("cli_roll_losses.csv");
    const CliResult gen = call({"synth-losses", "--dist", "t(4)", "--n", "40", "--seed",
                                "3", "--out", losses.path.c_str()});
    REQUIRE(gen.code == 0);

    const CliResult r = call({"rolling", "--losses", losses.path.c_str(), "--window",
                              "20", "--p", "0.9", "--q", "0.75", "--r", "0.97"});
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 22);  // header + 21 windows
    CHECK(lines[0] == "date,ratio_es_q,ratio_es_ex");
    CHECK(split(lines[1], ',')[0] == "2000-01-22");  // 20th observation

    const TempFile prices("cli_roll_prices.csv");
    {
        std::ofstream f(prices.path);
        f << "date,close\n2020-01-01,100\n2020-01-02,98\n2020-01-03,103\n";
    }
    const CliResult pr =
        call({"rolling", "--prices", prices.path.c_str(), "--window", "2"});
    REQUIRE(pr.code == 0);
    CHECK(split(pr.out, '\n').size() >= 2);

    const CliResult both = call({"rolling", "--losses", losses.path.c_str(), "--prices",
                                 prices.path.c_str()});
    CHECK(both.code == 2);
    const CliResult tiny =
        call({"rolling", "--losses", losses.path.c_str(), "--window", "1"});
    CHECK(tiny.code == 2);
    const CliResult missing =
        call({"rolling", "--losses", "no_such_losses_file.csv"});
    CHECK(missing.code == 1);
}

TEST_CASE("synthetic series respect the requested length and seed", "[cli]") {
    const CliResult a = call({"synth-losses", "--dist", "exp(1)", "--n", "5", "--seed",
                              "9", "--precision", "17"});
    const CliResult b = call({"synth-losses", "--dist", "exp(1)", "--n", "5", "--seed",
                              "9", "--precision", "17"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto lines = split(a.out, '\n');
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0] == "date,loss");
    CHECK(split(lines[1], ',')[0] == "2000-01-03");

    const CliResult j = call({"synth-losses", "--dist", "exp(1)", "--n", "5", "--seed",
                              "9", "--json"});
    REQUIRE(j.code == 0);
    CHECK(nlohmann::json::parse(j.out).size() == 5);

    const CliResult zero =
        call({"synth-losses", "--dist", "exp(1)", "--n", "0", "--seed", "9"});
    CHECK(zero.code == 2);
}

TEST_CASE("the built-in verification suite passes through the cli", "[cli]") {
    const CliResult r = call({"selftest", "table1", "--trials", "50"});
    CHECK(r.code == 0);
    CHECK(r.out.find("standardization") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);

    const CliResult j = call({"selftest", "table1", "--trials", "50", "--json"});
    REQUIRE(j.code == 0);
    const nlohmann::json obj = nlohmann::json::parse(j.out);
    CHECK(obj.at("all_pass").get<bool>());
    CHECK(obj.at("cells").size() == 72);

    const CliResult bad = call({"selftest", "tableX"});
    CHECK(bad.code == 2);
}

TEST_CASE("help requests succeed and parse errors do not", "[cli]") {
    const CliResult h = call({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("measure") != std::string::npos);
    CHECK(h.out.find("rolling") != std::string::npos);

    const CliResult hm = call({"measure", "--help"});
    CHECK(hm.code == 0);
    CHECK(hm.out.find("--measure") != std::string::npos);

    const CliResult none = call({});
    CHECK(none.code == 2);
    const CliResult unknown_sub = call({"frobnicate"});
    CHECK(unknown_sub.code == 2);
}

#pragma once

// Command-line front end. One subcommand per module; CSV or single values on
// stdout, JSON behind --json with numerically identical values. Exit codes:
// 0 success, 1 domain or runtime errors, 2 usage errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymptotics.hpp"
#include "calibration.hpp"
#include "distributions.hpp"
#include "marketdata.hpp"
#include "montecarlo.hpp"
#include "risk_measures.hpp"
#include "table1.hpp"
#include "variability.hpp"

namespace varmetrics {

/// Semantic misuse of flags discovered after parsing (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace cli_detail {

inline std::string fmt_num(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

/// JSON values go through the same formatter as the CSV output so both
/// carry numerically identical payloads; non-finite values become strings.
inline nlohmann::json json_num(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    return nlohmann::json::parse(fmt_num(v, precision));
}

inline EstimatorKind estimator_from_name(const std::string& s) {
    if (s == "dq") return EstimatorKind::dq;
    if (s == "des") return EstimatorKind::des;
    if (s == "dex") return EstimatorKind::dex;
    throw UsageError("unknown estimator '" + s + "'");
}

inline const char* method_name(AsymMethod m) {
    return m == AsymMethod::closed_form ? "closed_form" : "quadrature";
}

inline double eval_named_measure(const AnyDistribution& d, const std::string& name,
                                 const std::optional<double>& p) {
    auto level = [&]() -> double {
        if (!p) throw UsageError("--p is required for measure '" + name + "'");
        return *p;
    };
    if (name == "varl") return quantile_left(d, level());
    if (name == "varr") return quantile_right(d, level());
    if (name == "es") return es(d, level());
    if (name == "esl") return es_left(d, level());
    if (name == "ex") return expectile(d, level());
    if (name == "dq") return delta_q(d, level());
    if (name == "des") return delta_es(d, level());
    if (name == "dex") return delta_ex(d, level());
    if (name == "range") return range_measure(d);
    if (name == "var") return variance(d);
    if (name == "std") return std_dev(d);
    if (name == "mad") return mad(d);
    if (name == "mmd") return mmd(d);
    if (name == "gini") return gini_d(d);
    if (name == "reldev") return relative_deviation(d);
    if (name == "ginicoef") return gini_coefficient(d);
    throw UsageError("unknown measure '" + name + "'");
}

inline std::vector<double> parse_grid(const std::string& s) {
    double start = 0.0, stop = 0.0, step = 0.0;
    int consumed = -1;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%n", &start, &stop, &step, &consumed) != 3 ||
        consumed != static_cast<int>(s.size()))
        throw UsageError("--grid expects start:stop:step");
    if (!(step > 0.0) || !(start <= stop))
        throw UsageError("--grid expects start <= stop and step > 0");
    const auto count = static_cast<std::size_t>((stop - start) / step + 1e-9);
    std::vector<double> levels;
    levels.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i)
        levels.push_back(std::min(start + step * static_cast<double>(i), stop));
    return levels;
}

struct Opts {
    std::string dist;
    std::string measure;
    std::string estimator;
    std::string grid;
    std::string prices_path;
    std::string losses_path;
    std::string out_path;
    std::string target;
    double p = 0.0;
    double tol = 1e-8;
    double roll_p = 0.95;
    double roll_q = 0.875;
    double roll_r = 0.99;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 1;
    int bins = 60;
    int window = 253;
    int trials = 200;
    int precision = 10;
    bool json = false;
};

inline int do_measure(const Opts& o, bool has_p, std::ostream& out) {
    const AnyDistribution d = parse_distribution(o.dist);
    std::optional<double> p;
    if (has_p) p = o.p;
    const double v = eval_named_measure(d, o.measure, p);
    if (o.json) {
        nlohmann::json j;
        j["measure"] = o.measure;
        if (p) j["p"] = json_num(*p, o.precision);
        j["value"] = json_num(v, o.precision);
        out << j.dump() << '\n';
    } else {
        out << fmt_num(v, o.precision) << '\n';
    }
    return 0;
}

inline int do_asymvar(const Opts& o, std::ostream& out) {
    const AnyDistribution d = parse_distribution(o.dist);
    const EstimatorKind k = estimator_from_name(o.estimator);
    AsymVarReport rep;
    switch (k) {
        case EstimatorKind::dq: rep = sigma_q_sq(d, o.p); break;
        case EstimatorKind::des: rep = sigma_es_sq(d, o.p, o.tol); break;
        case EstimatorKind::dex: rep = sigma_ex_sq(d, o.p, o.tol); break;
    }
    if (o.json) {
        nlohmann::json j;
        j["sigma_sq"] = json_num(rep.sigma_sq, o.precision);
        j["method"] = method_name(rep.method);
        j["est_abs_error"] = json_num(rep.est_abs_error, o.precision);
        out << j.dump() << '\n';
    } else {
        out << "sigma_sq,method,est_abs_error\n"
            << fmt_num(rep.sigma_sq, o.precision) << ',' << method_name(rep.method) << ','
            << fmt_num(rep.est_abs_error, o.precision) << '\n';
    }
    return 0;
}

inline int do_simulate(const Opts& o, std::ostream& out) {
    SimConfig cfg{parse_distribution(o.dist), estimator_from_name(o.estimator),
                  o.p,  o.n,  o.reps, o.seed, o.bins};
    const SimResult res = run_simulation(cfg);
    if (!o.out_path.empty()) export_histogram(res, cfg.n, o.out_path);
    if (o.json) {
        nlohmann::json j;
        j["true_value"] = json_num(res.true_value, o.precision);
        j["sigma_sq"] = json_num(res.sigma_sq, o.precision);
        j["mean_e"] = json_num(res.mean_e, o.precision);
        j["var_e"] = json_num(res.var_e, o.precision);
        j["ks_distance"] = json_num(res.ks_distance, o.precision);
        out << j.dump() << '\n';
    } else {
        out << "true_value,sigma_sq,mean_e,var_e,ks_distance\n"
            << fmt_num(res.true_value, o.precision) << ','
            << fmt_num(res.sigma_sq, o.precision) << ',' << fmt_num(res.mean_e, o.precision)
            << ',' << fmt_num(res.var_e, o.precision) << ','
            << fmt_num(res.ks_distance, o.precision) << '\n';
    }
    return 0;
}

inline int do_calibrate(const Opts& o, bool has_p, bool has_grid, std::ostream& out) {
    if (has_p == has_grid)
        throw UsageError("calibrate needs exactly one of --p or --grid");
    const AnyDistribution d = parse_distribution(o.dist);
    std::vector<LevelTriple> rows;
    if (has_p) {
        rows.push_back(match_levels(d, o.p));
    } else {
        const std::vector<double> levels = parse_grid(o.grid);
        rows = calibration_curve(d, levels);
    }
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f) throw std::runtime_error("cannot open for writing: " + o.out_path);
        f << "p,q,r\n";
        for (const auto& t : rows)
            f << fmt_num(t.p, 17) << ',' << fmt_num(t.q, 17) << ',' << fmt_num(t.r, 17)
              << '\n';
    }
    if (o.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : rows) {
            nlohmann::json j;
            j["p"] = json_num(t.p, o.precision);
            j["q"] = json_num(t.q, o.precision);
            j["r"] = json_num(t.r, o.precision);
            arr.push_back(j);
        }
        out << (has_p ? arr.front() : arr).dump() << '\n';
    } else {
        out << "p,q,r\n";
        for (const auto& t : rows)
            out << fmt_num(t.p, o.precision) << ',' << fmt_num(t.q, o.precision) << ','
                << fmt_num(t.r, o.precision) << '\n';
    }
    return 0;
}

inline int do_rolling(const Opts& o, bool has_prices, bool has_losses, std::ostream& out) {
    if (has_prices == has_losses)
        throw UsageError("rolling needs exactly one of --prices or --losses");
    if (o.window < 2) throw UsageError("--window must be at least 2");
    const LossSeries ls = has_prices ? to_log_losses(load_prices(o.prices_path))
                                     : read_losses(o.losses_path);
    RollingConfig cfg;
    cfg.window = static_cast<std::size_t>(o.window);
    cfg.p = o.roll_p;
    cfg.q = o.roll_q;
    cfg.r = o.roll_r;
    const std::vector<RatioRow> rows = rolling_ratios(ls, cfg);
    if (!o.out_path.empty()) export_ratios(rows, o.out_path);
    if (o.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json j;
            j["date"] = r.date;
            j["ratio_es_q"] =
                r.ratio_es_q ? json_num(*r.ratio_es_q, o.precision) : nlohmann::json();
            j["ratio_es_ex"] =
                r.ratio_es_ex ? json_num(*r.ratio_es_ex, o.precision) : nlohmann::json();
            arr.push_back(j);
        }
        out << arr.dump() << '\n';
    } else {
        out << "date,ratio_es_q,ratio_es_ex\n";
        for (const auto& r : rows) {
            out << r.date << ',';
            if (r.ratio_es_q) out << fmt_num(*r.ratio_es_q, o.precision);
            out << ',';
            if (r.ratio_es_ex) out << fmt_num(*r.ratio_es_ex, o.precision);
            out << '\n';
        }
    }
    return 0;
}

inline int do_synth(const Opts& o, std::ostream& out) {
    if (o.n < 1) throw UsageError("--n must be positive");
    const LossSeries ls = synth_losses(parse_distribution(o.dist), o.n, o.seed);
    if (!o.out_path.empty()) write_losses(ls, o.out_path);
    if (o.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < ls.losses.size(); ++i) {
            nlohmann::json j;
            j["date"] = ls.dates[i];
            j["loss"] = json_num(ls.losses[i], o.precision);
            arr.push_back(j);
        }
        out << arr.dump() << '\n';
    } else {
        out << "date,loss\n";
        for (std::size_t i = 0; i < ls.losses.size(); ++i)
            out << ls.dates[i] << ',' << fmt_num(ls.losses[i], o.precision) << '\n';
    }
    return 0;
}

inline int do_selftest(const Opts& o, std::ostream& out) {
    const Table1Report rep = run_table1(o.seed, o.trials);
    if (o.json) {
        nlohmann::json j;
        j["seed"] = o.seed;
        j["trials"] = o.trials;
        j["all_pass"] = rep.all_pass();
        nlohmann::json cells = nlohmann::json::array();
        for (std::size_t pi = 0; pi < table1_properties.size(); ++pi) {
            for (std::size_t mi = 0; mi < table1_measures.size(); ++mi) {
                const Table1Cell& c = rep.cells[pi][mi];
                nlohmann::json cj;
                cj["property"] = property_label(table1_properties[pi]);
                cj["measure"] = measure_label(table1_measures[mi]);
                cj["expected"] = c.expected_yes ? "yes" : "no";
                cj["passed"] = c.passed;
                if (!c.note.empty()) cj["note"] = c.note;
                cells.push_back(cj);
            }
        }
        j["cells"] = cells;
        out << j.dump() << '\n';
    } else {
        out << rep.render();
    }
    return rep.all_pass() ? 0 : 1;
}

} // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
    using cli_detail::Opts;
    Opts o;

    CLI::App app{"parametric variability measures induced by risk measures"};
    app.name("varmetrics");
    app.require_subcommand(1);

    static const char* grammar =
        "distribution spec grammar: normal(mu,sigma) | exp(rate) | t(nu) | "
        "pareto(alpha) | discrete(x1:p1,x2:p2,...)";
    app.footer(grammar);

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", o.json, "emit a JSON object instead of CSV");
        sub->add_option("--precision", o.precision, "significant digits on stdout")
            ->default_val(10)
            ->check(CLI::Range(1, 17));
        sub->footer(grammar);
    };

    const std::vector<std::string> measure_names = {
        "varl", "varr", "es",  "esl", "ex",   "dq",     "des",      "dex",
        "range", "var",  "std", "mad", "mmd", "gini", "reldev", "ginicoef"};
    const std::vector<std::string> estimator_names = {"dq", "des", "dex"};

    CLI::App* m = app.add_subcommand("measure", "evaluate one measure of a distribution");
    m->add_option("--dist", o.dist, "distribution spec")->required();
    m->add_option("--measure", o.measure, "measure name")
        ->required()
        ->check(CLI::IsMember(measure_names));
    CLI::Option* m_p = m->add_option("--p", o.p, "level in (0,1)");
    add_common(m);

    CLI::App* av = app.add_subcommand("asymvar", "asymptotic variance of an estimator");
    av->add_option("--dist", o.dist, "distribution spec")->required();
    av->add_option("--estimator", o.estimator, "estimator kind")
        ->required()
        ->check(CLI::IsMember(estimator_names));
    av->add_option("--p", o.p, "level in (0,1)")->required();
    av->add_option("--tol", o.tol, "absolute quadrature tolerance")->default_val(1e-8);
    add_common(av);

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo check of the normal limit");
    sim->add_option("--dist", o.dist, "distribution spec")->required();
    sim->add_option("--estimator", o.estimator, "estimator kind")
        ->required()
        ->check(CLI::IsMember(estimator_names));
    sim->add_option("--p", o.p, "level in (0,1)")->required();
    sim->add_option("--n", o.n, "sample size per replication")->required();
    sim->add_option("--reps", o.reps, "number of replications")->required();
    sim->add_option("--seed", o.seed, "master seed")->required();
    sim->add_option("--bins", o.bins, "histogram bins")->default_val(60);
    sim->add_option("--out", o.out_path, "write the error histogram to this CSV file");
    add_common(sim);

    CLI::App* cal = app.add_subcommand("calibrate", "match ES and expectile levels to --p");
    cal->add_option("--dist", o.dist, "distribution spec")->required();
    CLI::Option* cal_p = cal->add_option("--p", o.p, "single quantile level in (1/2,1)");
    CLI::Option* cal_grid =
        cal->add_option("--grid", o.grid, "levels start:stop:step instead of --p");
    cal->add_option("--out", o.out_path, "write the curve to this CSV file");
    add_common(cal);

    CLI::App* roll = app.add_subcommand("rolling", "rolling variability ratios of a series");
    CLI::Option* roll_prices =
        roll->add_option("--prices", o.prices_path, "CSV of date,close prices");
    CLI::Option* roll_losses =
        roll->add_option("--losses", o.losses_path, "CSV of date,loss log-losses");
    roll->add_option("--window", o.window, "window length in observations")
        ->default_val(253);
    roll->add_option("--p", o.roll_p, "inter-quantile level")->default_val(0.95);
    roll->add_option("--q", o.roll_q, "inter-ES level")->default_val(0.875);
    roll->add_option("--r", o.roll_r, "inter-expectile level")->default_val(0.99);
    roll->add_option("--out", o.out_path, "write the ratios to this CSV file");
    add_common(roll);

    CLI::App* synth = app.add_subcommand("synth-losses", "draw an iid synthetic loss series");
    synth->add_option("--dist", o.dist, "distribution spec")->required();
    synth->add_option("--n", o.n, "series length")->required();
    synth->add_option("--seed", o.seed, "master seed")->required();
    synth->add_option("--out", o.out_path, "write the series to this CSV file");
    add_common(synth);

    CLI::App* st = app.add_subcommand("selftest", "run a built-in verification suite");
    st->add_option("target", o.target, "suite name")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>{"table1"}));
    st->add_option("--seed", o.seed, "master seed")->default_val(20260822ULL);
    st->add_option("--trials", o.trials, "randomized trials per positive cell")
        ->default_val(200)
        ->check(CLI::Range(1, 1000000));
    add_common(st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        while (!target->get_subcommands().empty())
            target = target->get_subcommands().front();
        out << target->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    }

    try {
        using namespace cli_detail;
        if (m->parsed()) return do_measure(o, m_p->count() > 0, out);
        if (av->parsed()) return do_asymvar(o, out);
        if (sim->parsed()) return do_simulate(o, out);
        if (cal->parsed())
            return do_calibrate(o, cal_p->count() > 0, cal_grid->count() > 0, out);
        if (roll->parsed())
            return do_rolling(o, roll_prices->count() > 0, roll_losses->count() > 0, out);
        if (synth->parsed()) return do_synth(o, out);
        if (st->parsed()) return do_selftest(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand executed\n";
    return 2;
}

} // namespace varmetrics

// ymflow: command-line front end for the radial semilinear heat flow lab.
//
// Subcommands: simulate, law, kernel-check, bounds-check, identities-check,
// report.  Exit codes: 0 all-PASS, 1 any FAIL, 2 usage or config error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ymflow/boundscheck.hpp"
#include "ymflow/config.hpp"
#include "ymflow/pdesolver.hpp"
#include "ymflow/quadrature.hpp"
#include "ymflow/radialheat.hpp"
#include "ymflow/scalinglaw.hpp"
#include "ymflow/specfun.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ymflow;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

struct CheckReporter {
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
    int exit_code() const { return failures == 0 ? 0 : 1; }
};

config::Config load_config(const std::string& path) {
    if (path.empty()) return config::Config::parse_text("", "<defaults>");
    return config::Config::parse_file(path);
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<double> t0_flag, std::optional<double> horizon_flag,
                 std::optional<double> epsilon_flag) {
    const auto cfg = load_config(config_path);
    pdesolver::SimConfig sim;
    sim.t0 = t0_flag.value_or(cfg.get_double("sim.t0", sim.t0));
    sim.horizon = horizon_flag.value_or(cfg.get_double("sim.horizon", sim.horizon));
    sim.with_soliton = cfg.get_bool("sim.with_soliton", sim.with_soliton);
    sim.lambda_init = cfg.get_double("sim.lambda_init", sim.lambda_init);
    sim.epsilon = epsilon_flag.value_or(cfg.get_double("sim.epsilon", sim.epsilon));
    sim.theta_time_origin =
        cfg.get_double("sim.theta_time_origin", sim.theta_time_origin);
    sim.snapshot_count = int(cfg.get_int("sim.snapshot_count", sim.snapshot_count));
    sim.blowup_guard = cfg.get_double("sim.blowup_guard", sim.blowup_guard);
    sim.grid.r_core = cfg.get_double("grid.r_core", sim.grid.r_core);
    sim.grid.h0 = cfg.get_double("grid.h0", sim.grid.h0);
    sim.grid.stretch = cfg.get_double("grid.stretch", sim.grid.stretch);
    sim.grid.r_max = cfg.get_double("grid.r_max", sim.grid.r_max);
    sim.stepper.rtol = cfg.get_double("stepper.rtol", sim.stepper.rtol);
    sim.stepper.atol = cfg.get_double("stepper.atol", sim.stepper.atol);
    sim.stepper.max_dt = cfg.get_double("stepper.max_dt", sim.stepper.max_dt);
    sim.stepper.initial_dt = cfg.get_double("stepper.initial_dt", sim.stepper.initial_dt);
    if (cfg.get_string("sim.lambda_extraction", "origin") == "fit")
        sim.lambda_extraction = pdesolver::LambdaPolicy::WeightedFit;
    if (sim.epsilon > 0.0) sim.theta0 = config::theta0_from_config(cfg);

    fs::create_directories(out_dir);
    const auto res = pdesolver::simulate(sim);

    res.trace.write_csv_file((fs::path(out_dir) / "trace.csv").string());
    res.snapshots.back().write_csv_file(
        (fs::path(out_dir) / "final_profile.csv").string());

    json summary;
    summary["command"] = "simulate";
    summary["t0"] = sim.t0;
    summary["horizon"] = sim.horizon;
    summary["epsilon"] = sim.epsilon;
    summary["steps_accepted"] = res.diagnostics.steps_accepted;
    summary["steps_rejected"] = res.diagnostics.steps_rejected;
    summary["blowup_detected"] = res.diagnostics.blowup_detected;
    summary["last_valid_time"] = res.diagnostics.last_valid_time;
    summary["max_abs_u"] = res.diagnostics.max_abs_u;
    if (!res.trace.loglambda.empty())
        summary["loglambda_final"] = res.trace.loglambda.back();
    write_json(fs::path(out_dir) / "summary.json", summary);
    return res.diagnostics.blowup_detected ? 1 : 0;
}

// --------------------------------------------------------------------- law

int cmd_law(const std::string& config_path, const std::string& out_dir,
            std::string family, std::optional<double> a_flag,
            std::optional<int> sign_flag, std::optional<double> t0_flag,
            std::optional<double> T_flag) {
    const auto cfg = load_config(config_path);
    profiles::Theta0Spec spec = config::theta0_from_config(cfg);
    if (!family.empty()) {
        if (family == "powerlog") spec.family = profiles::Theta0Family::PowerLog;
        else if (family == "oscillatory")
            spec.family = profiles::Theta0Family::OscillatoryExplicit;
        else if (family == "table") spec.family = profiles::Theta0Family::CustomTable;
        else throw std::runtime_error("unknown theta0 family: " + family);
    }
    if (a_flag) spec.a = *a_flag;
    if (sign_flag) spec.sign = *sign_flag;
    spec.validate();
    const double t0 = t0_flag.value_or(cfg.get_double("law.t0", 100.0));
    const double T = T_flag.value_or(cfg.get_double("law.T", 1e6));

    fs::create_directories(out_dir);
    // keep enough trace samples for the regime classifier on short spans
    scalinglaw::ModulationOptions mopt;
    const double decades = std::log10(T / t0);
    mopt.samples_per_decade = std::max(
        mopt.samples_per_decade, static_cast<int>(std::ceil(160.0 / decades)));
    const auto trace = scalinglaw::integrate_modulation(spec, t0, T, mopt);
    trace.write_csv_file((fs::path(out_dir) / "trace.csv").string());

    scalinglaw::RegimeLabel label;
    if (spec.family == profiles::Theta0Family::OscillatoryExplicit) {
        // Desk-scale T sees less than one period of the closed-form law, so
        // the oscillatory family is classified on its closed-form trace over
        // several periods in theta = log log lambda-time.
        const double L0 = std::log(2.0 + t0);
        const auto cf = scalinglaw::lambda0_closed_form_trace(
            spec.a, L0, L0 * std::exp(4.0 * M_PI), 4000);
        cf.write_csv_file((fs::path(out_dir) / "closed_form.csv").string());
        label = scalinglaw::classify_regime(cf);
    } else {
        label = scalinglaw::classify_regime(trace);
    }

    json verdict;
    verdict["regime"] = scalinglaw::regime_name(label.regime);
    verdict["fitted_exponent"] = label.fitted_exponent;
    verdict["fit_r2"] = label.fit_r2;
    verdict["a"] = spec.a;
    verdict["t0"] = t0;
    verdict["T"] = T;
    write_json(fs::path(out_dir) / "regime.json", verdict);
    std::cout << "regime: " << scalinglaw::regime_name(label.regime) << "\n";
    return label.regime == scalinglaw::Regime::Inconclusive ? 1 : 0;
}

// ------------------------------------------------------------ kernel-check

int cmd_kernel_check() {
    CheckReporter rep;

    for (int n : {3, 6}) {
        double worst = 0.0;
        for (double r : {0.0, 0.7, 2.5}) {
            const double v = radialheat::heat_evolve_point(
                n, [](double) { return 1.0; }, 0.0, 1.0, r, 1e-12);
            worst = std::max(worst, std::fabs(v - 1.0));
        }
        rep.check("constants_preservation_n" + std::to_string(n), worst <= 1e-8,
                  "max deviation " + fmt17(worst));
    }

    {
        double worst = 0.0;
        for (int n : {3, 6})
            for (double t : {0.1, 1.0})
                for (double r : {0.3, 1.1, 4.0})
                    for (double s : {0.5, 2.2}) {
                        const double lhs = std::pow(r, n - 1)
                                           * radialheat::kernel_gamma(n, r, s, t);
                        const double rhs = std::pow(s, n - 1)
                                           * radialheat::kernel_gamma(n, s, r, t);
                        worst = std::max(worst, std::fabs(lhs - rhs)
                                                    / std::max(lhs, rhs));
                    }
        rep.check("detailed_balance", worst <= 1e-12, "max rel " + fmt17(worst));
    }

    {
        // Gaussian datum e^{-r^2/4a} evolves to (a/(a+t))^{n/2} e^{-r^2/4(a+t)}
        const double A = 0.7, t = 1.3;
        double worst = 0.0;
        for (int n : {3, 6})
            for (double r : {0.0, 1.0, 3.5}) {
                const double got = radialheat::heat_evolve_point(
                    n, [&](double s) { return std::exp(-s * s / (4.0 * A)); },
                    0.0, t, r, 1e-13);
                const double want = std::pow(A / (A + t), 0.5 * n)
                                    * std::exp(-r * r / (4.0 * (A + t)));
                worst = std::max(worst, std::fabs(got - want) / want);
            }
        rep.check("gaussian_closed_form", worst <= 1e-6, "max rel " + fmt17(worst));
    }

    {
        // J_2(kr)/r^2 is a -k^2 eigenfunction of the 6-d radial Laplacian,
        // so the flow must scale it by e^{-k^2 t}.
        const double k = 2.0, t = 0.5;
        auto phi = [&](double r) {
            if (r < 1e-8) return k * k / 8.0;
            return specfun::bessel_j(specfun::BesselOrder(2.0), k * r) / (r * r);
        };
        double worst = 0.0;
        for (double r : {0.0, 1.0, 3.0}) {
            const double got = radialheat::heat_evolve_point(6, phi, 0.0, t, r, 1e-12);
            const double want = std::exp(-k * k * t) * phi(r);
            worst = std::max(worst, std::fabs(got - want) / std::fabs(want));
        }
        rep.check("hankel_mode_decay", worst <= 1e-5, "max rel " + fmt17(worst));
    }

    return rep.exit_code();
}

// -------------------------------------------------------- identities-check

int cmd_identities_check() {
    CheckReporter rep;

    double worst1 = 0.0, worst2 = 0.0;
    for (double s : {0.5, 1.0, 2.0, 3.0, 5.0})
        for (double mult : {2.0, 5.0, 25.0, 400.0}) {
            const double t = mult * s * s;
            const auto [e1, e2] = scalinglaw::integral_identities_check(s, t, s * s);
            worst1 = std::max(worst1, e1);
            worst2 = std::max(worst2, e2);
        }
    rep.check("eta_identity_from_s2", worst1 <= 1e-10, "max err " + fmt17(worst1));
    rep.check("eta_identity_from_t0", worst2 <= 1e-10, "max err " + fmt17(worst2));

    {
        QuadOptions opt;
        opt.rel_tol = 1e-13;
        const double spot = integrate_adaptive(
            [](double lx) {
                const double eta = std::exp(lx);
                return eta * std::pow(eta, -3.0) * std::exp(-1.0 / (4.0 * eta));
            },
            std::log(1.0), std::log(4.0), opt).value;
        rep.check("spot_value_s1_t4", std::fabs(spot - 0.39400640640099100) < 1e-8,
                  "value " + fmt17(spot));
    }

    {
        auto box = [](double s) { return s <= 1.0 ? 1.0 : 0.0; };
        const double r1 = scalinglaw::fubini_check(box, 100.0, 1e4, {1.0});
        rep.check("fubini_box", r1 <= 1e-8, "residual " + fmt17(r1));
        profiles::Theta0Spec spec;
        spec.family = profiles::Theta0Family::PowerLog;
        spec.a = 0.5;
        const double r2 = scalinglaw::fubini_check(spec, 100.0, 1e4);
        rep.check("fubini_powerlog", r2 <= 1e-8, "residual " + fmt17(r2));
    }

    return rep.exit_code();
}

// ------------------------------------------------------------ bounds-check

int cmd_bounds_check(const std::string& out_dir, std::uint64_t seed, int jobs,
                     const std::string& only) {
    fs::create_directories(out_dir);
    auto deck = boundscheck::standard_cases();
    if (!only.empty()) {
        std::erase_if(deck, [&](const boundscheck::BoundCase& c) {
            return c.id.find(only) == std::string::npos;
        });
        if (deck.empty()) {
            std::cerr << "no case matches --only " << only << "\n";
            return 2;
        }
    }

    struct CaseOutcome {
        boundscheck::SweepStats stats;
        double t0_factor = 1.0;
    };
    auto run_case = [&](const boundscheck::BoundCase& c) {
        boundscheck::SweepOptions opt;
        opt.seed = seed;
        if (c.sweep_t_min > 0.0) opt.t_min = c.sweep_t_min;
        if (c.sweep_t_max > 0.0) opt.t_max = c.sweep_t_max;
        CaseOutcome out;
        out.stats = boundscheck::ratio_sweep(c, opt);
        out.t0_factor = boundscheck::t0_stability_factor(c, opt);
        return out;
    };

    std::vector<CaseOutcome> outcomes(deck.size());
    if (jobs > 1) {
        std::vector<std::future<CaseOutcome>> futs;
        futs.reserve(deck.size());
        for (const auto& c : deck)
            futs.push_back(std::async(std::launch::async, run_case, c));
        for (size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < deck.size(); ++i) outcomes[i] = run_case(deck[i]);
    }

    CheckReporter rep;
    json summary = json::array();
    for (size_t i = 0; i < deck.size(); ++i) {
        const auto& o = outcomes[i];
        std::ofstream csv(fs::path(out_dir) / ("case_" + deck[i].id + ".csv"));
        boundscheck::write_sweep_csv(o.stats, csv);
        const bool ok = o.stats.pass && o.t0_factor < 2.0;
        json v;
        v["case_id"] = deck[i].id;
        v["max_ratio"] = o.stats.max_ratio;
        v["slope"] = o.stats.slope;
        v["t0_stability_factor"] = o.t0_factor;
        v["pass"] = ok;
        write_json(fs::path(out_dir) / ("verdict_" + deck[i].id + ".json"), v);
        summary.push_back(v);
        rep.check("bound_" + deck[i].id, ok,
                  "max " + fmt17(o.stats.max_ratio) + ", slope "
                      + fmt17(o.stats.slope) + ", t0 factor " + fmt17(o.t0_factor));
    }

    if (only.empty()) {
        // mutation control: weakening the log factor must be caught
        boundscheck::BoundCase mut = boundscheck::standard_cases().front();
        mut.id = "mutated_middle_b4";
        mut.rhs_a_shift = 0.5;
        boundscheck::SweepOptions opt;
        opt.seed = seed;
        opt.t_max = 1e6;
        const auto stats = boundscheck::ratio_sweep(mut, opt);
        rep.check("mutation_detected", !stats.pass, "slope " + fmt17(stats.slope));
        json v;
        v["case_id"] = mut.id;
        v["slope"] = stats.slope;
        v["pass_expected"] = false;
        v["pass"] = stats.pass;
        summary.push_back(v);
    }

    write_json(fs::path(out_dir) / "bounds_summary.json", summary);
    return rep.exit_code();
}

// ------------------------------------------------------------------ report

struct LoadedTrace {
    std::string name;
    std::vector<double> t, loglambda, rate;
};

LoadedTrace load_trace_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    LoadedTrace tr;
    tr.name = path.parent_path().filename().string();
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ','))
            row.push_back(cell.empty() ? 0.0 : std::stod(cell));
        if (row.size() < 3) throw std::runtime_error("bad trace row: " + line);
        tr.t.push_back(row[0]);
        tr.loglambda.push_back(row[1]);
        tr.rate.push_back(row[2]);
    }
    return tr;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    if (run_dirs.empty()) {
        std::cerr << "report: no run directories given\n";
        return 2;
    }
    std::vector<LoadedTrace> traces;
    for (const auto& d : run_dirs)
        traces.push_back(load_trace_csv(fs::path(d) / "trace.csv"));

    fs::create_directories(out_dir);
    {
        std::ofstream os(fs::path(out_dir) / "loglambda_vs_logt.csv");
        os << "series,logt,loglambda,rate\n";
        for (const auto& tr : traces)
            for (size_t k = 0; k < tr.t.size(); ++k)
                os << tr.name << ',' << fmt17(std::log(tr.t[k])) << ','
                   << fmt17(tr.loglambda[k]) << ',' << fmt17(tr.rate[k]) << "\n";
    }

    json fits;
    for (const auto& tr : traces) {
        scalinglaw::ModulationTrace m;
        m.times = tr.t;
        m.loglambda = tr.loglambda;
        m.rate = tr.rate;
        json f;
        try {
            const auto label = scalinglaw::classify_regime(m);
            f["regime"] = scalinglaw::regime_name(label.regime);
            f["fitted_exponent"] = label.fitted_exponent;
            f["fit_r2"] = label.fit_r2;
        } catch (const std::exception& e) {
            f["regime"] = "Inconclusive";
            f["error"] = e.what();
        }
        fits[tr.name] = f;
    }
    write_json(fs::path(out_dir) / "envelope_fit.json", fits);

    if (traces.size() == 2) {
        // pointwise deltas on the first series' time base
        const auto& a = traces[0];
        const auto& b = traces[1];
        std::ofstream os(fs::path(out_dir) / "deltas.csv");
        os << "t,loglambda_" << a.name << ",loglambda_" << b.name << ",delta\n";
        for (size_t k = 0; k < a.t.size(); ++k) {
            const double t = a.t[k];
            if (t < b.t.front() || t > b.t.back()) continue;
            size_t j = 1;
            while (j < b.t.size() - 1 && b.t[j] < t) ++j;
            const double w = (t - b.t[j - 1]) / (b.t[j] - b.t[j - 1]);
            const double bl = (1.0 - w) * b.loglambda[j - 1] + w * b.loglambda[j];
            os << fmt17(t) << ',' << fmt17(a.loglambda[k]) << ',' << fmt17(bl)
               << ',' << fmt17(a.loglambda[k] - bl) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a 6-d radial semilinear heat flow"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--config", config_path, "config file (section.key = value)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized sweep sampling");
    app.add_option("--jobs", jobs, "worker pool size for sweeps");

    auto* sim = app.add_subcommand("simulate", "integrate the reduced flow");
    std::optional<double> sim_t0, sim_T, sim_eps;
    sim->add_option("--t0", sim_t0, "start time");
    sim->add_option("--T", sim_T, "horizon");
    sim->add_option("--epsilon", sim_eps, "perturbation amplitude");

    auto* law = app.add_subcommand("law", "modulation law trace and regime");
    std::string law_family;
    std::optional<double> law_a, law_t0, law_T;
    std::optional<int> law_sign;
    law->add_option("--theta0", law_family, "powerlog|oscillatory|table");
    law->add_option("--a", law_a, "envelope exponent in (0,1)");
    law->add_option("--sign", law_sign, "+1 or -1 (powerlog)");
    law->add_option("--t0", law_t0, "start time");
    law->add_option("--T", law_T, "horizon");

    app.add_subcommand("kernel-check", "radial heat kernel golden tests");
    app.add_subcommand("identities-check", "scaling-law integral identities");

    auto* bc = app.add_subcommand("bounds-check", "convolution bound sweeps");
    std::string bc_only;
    bc->add_option("--only", bc_only, "restrict to case ids containing this");

    auto* rep = app.add_subcommand("report", "merge run artifacts");
    std::vector<std::string> run_dirs;
    rep->add_option("dirs", run_dirs, "run directories with trace.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("simulate"))
            return cmd_simulate(config_path, out_dir, sim_t0, sim_T, sim_eps);
        if (app.got_subcommand("law"))
            return cmd_law(config_path, out_dir, law_family, law_a, law_sign,
                           law_t0, law_T);
        if (app.got_subcommand("kernel-check")) return cmd_kernel_check();
        if (app.got_subcommand("identities-check")) return cmd_identities_check();
        if (app.got_subcommand("bounds-check"))
            return cmd_bounds_check(out_dir, seed, jobs, bc_only);
        if (app.got_subcommand("report")) return cmd_report(run_dirs, out_dir);
    } catch (const config::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

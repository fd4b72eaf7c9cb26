// Command-line front end for the IEV library: Monte Carlo simulation,
// stationary-density solving, closed-form bounds, and figure-style
// parameter sweeps, all written as self-describing CSV files.
//
// Talks to the library exclusively through the C API in iev/iev.h.

#include "iev/iev.h"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CommonOpts {
    double rho = 0.95;
    double sigma_u2 = 1.0;
    double sigma_v2 = 1.0;
    double lambda = 0.0;
    double snr_db = 0.0;
    bool have_lambda = false;
    bool have_snr = false;
    std::vector<double> thresholds;
    long steps = 1000000;
    long burn_in = 1000;
    std::uint64_t seed = 1;
    int grid_size = 1024;
    double tol = 1e-10;
    int max_iter = 10000;
    double m0 = 1.0;
    int bins = 200;
    std::string out;
    std::string config_path;

    double resolved_lambda() const {
        return have_lambda ? lambda : std::pow(10.0, -snr_db / 10.0);
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_out) {
    cmd->add_option("--rho", o.rho, "process correlation coefficient");
    cmd->add_option("--sigma-u2", o.sigma_u2, "process noise variance");
    cmd->add_option("--sigma-v2", o.sigma_v2, "measurement noise variance");
    auto* lam = cmd->add_option("--lambda", o.lambda,
                                "SNR exponential rate (1/mean SNR)");
    auto* snr = cmd->add_option("--snr-db", o.snr_db,
                                "average SNR in dB (lambda = 10^(-snr/10))");
    lam->excludes(snr);
    snr->excludes(lam);
    cmd->add_option("--mth", o.thresholds,
                    "outage threshold(s), repeatable");
    cmd->add_option("--steps", o.steps, "Monte Carlo chain length");
    cmd->add_option("--burn-in", o.burn_in, "discarded initial steps");
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--grid-size", o.grid_size, "density grid nodes");
    cmd->add_option("--tol", o.tol, "solver L1 convergence tolerance");
    cmd->add_option("--max-iter", o.max_iter, "solver iteration cap");
    cmd->add_option("--m0", o.m0, "initial error variance M(0)");
    cmd->add_option("--bins", o.bins, "histogram bin count");
    auto* out = cmd->add_option("--out", o.out, "output path prefix");
    if (need_out) out->required();
    cmd->add_option("--config", o.config_path,
                    "flat key=value config file; command-line flags win");
    cmd->callback([lam, snr, &o] {
        o.have_lambda = lam->count() > 0;
        o.have_snr = snr->count() > 0;
    });
}

int fail(const std::string& msg, int code) {
    std::cerr << "error: " << msg << "\n";
    return code;
}

int fail_status(iev_status s) {
    std::string msg = iev_status_message(s);
    const char* detail = iev_last_error();
    if (detail && *detail) msg += std::string(": ") + detail;
    return fail(msg, s == IEV_ERR_NO_CONVERGENCE ? kExitNumerical
                                                 : kExitUsage);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using ModelPtr = std::unique_ptr<iev_model, decltype(&iev_model_destroy)>;

std::optional<ModelPtr> make_model(const CommonOpts& o) {
    if (!o.have_lambda && !o.have_snr) {
        fail("exactly one of --lambda / --snr-db is required", kExitUsage);
        return std::nullopt;
    }
    iev_model* m = nullptr;
    const iev_status s = iev_model_create_rayleigh(
        o.rho, o.sigma_u2, o.sigma_v2, o.resolved_lambda(), &m);
    if (s != IEV_OK) {
        fail_status(s);
        return std::nullopt;
    }
    return ModelPtr(m, &iev_model_destroy);
}

void write_header(std::ostream& os, const CommonOpts& o,
                  const std::string& command) {
    os << "# command = " << command << "\n";
    os << "# rho = " << fmt(o.rho) << "\n";
    os << "# sigma_u2 = " << fmt(o.sigma_u2) << "\n";
    os << "# sigma_v2 = " << fmt(o.sigma_v2) << "\n";
    os << "# lambda = " << fmt(o.resolved_lambda()) << "\n";
    os << "# snr_db = " << fmt(-10.0 * std::log10(o.resolved_lambda()))
       << "\n";
    os << "# steps = " << o.steps << "\n";
    os << "# burn_in = " << o.burn_in << "\n";
    os << "# seed = " << o.seed << "\n";
    os << "# grid_size = " << o.grid_size << "\n";
    os << "# tol = " << fmt(o.tol) << "\n";
    os << "# max_iter = " << o.max_iter << "\n";
    os << "# m0 = " << fmt(o.m0) << "\n";
}

std::optional<std::ofstream> open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        fail("cannot open output file: " + path, kExitUsage);
        return std::nullopt;
    }
    return os;
}

std::vector<double> sorted_thresholds(const CommonOpts& o) {
    auto t = o.thresholds;
    std::sort(t.begin(), t.end());
    return t;
}

int run_validate(const CommonOpts& o) {
    auto model = make_model(o);
    if (!model) return kExitUsage;
    char buf[1024];
    int warnings = 0;
    const iev_status s =
        iev_model_validate(model->get(), buf, sizeof(buf), &warnings);
    if (buf[0]) std::cout << buf;
    if (s != IEV_OK) return fail_status(s);
    std::cout << "ok (" << warnings << " warning"
              << (warnings == 1 ? "" : "s") << ")\n";
    std::cout << "m_max = " << fmt(iev_model_m_max(model->get())) << "\n";
    return 0;
}

int run_simulate(const CommonOpts& o) {
    auto model = make_model(o);
    if (!model) return kExitUsage;
    iev_trajectory* traj = nullptr;
    iev_status s = iev_simulate(model->get(), o.steps, o.burn_in, o.m0,
                                o.seed, &traj);
    if (s != IEV_OK) return fail_status(s);
    std::unique_ptr<iev_trajectory, decltype(&iev_trajectory_destroy)> tp(
        traj, &iev_trajectory_destroy);

    std::vector<double> centers(static_cast<std::size_t>(o.bins));
    std::vector<double> densities(static_cast<std::size_t>(o.bins));
    s = iev_trajectory_histogram(traj, o.bins, centers.data(),
                                 densities.data());
    if (s != IEV_OK) return fail_status(s);

    auto hist = open_out(o.out + ".hist.csv");
    if (!hist) return kExitUsage;
    write_header(*hist, o, "simulate");
    *hist << "bin_center,density\n";
    for (int i = 0; i < o.bins; ++i)
        *hist << fmt(centers[static_cast<std::size_t>(i)]) << ","
              << fmt(densities[static_cast<std::size_t>(i)]) << "\n";

    auto outage = open_out(o.out + ".outage.csv");
    if (!outage) return kExitUsage;
    write_header(*outage, o, "simulate");
    *outage << "M_th,p_hat,ci_lo,ci_hi\n";
    for (double th : sorted_thresholds(o)) {
        double p, lo, hi;
        s = iev_trajectory_outage(traj, th, &p, &lo, &hi);
        if (s != IEV_OK) return fail_status(s);
        *outage << fmt(th) << "," << fmt(p) << "," << fmt(lo) << ","
                << fmt(hi) << "\n";
    }
    return 0;
}

int run_solve(const CommonOpts& o) {
    auto model = make_model(o);
    if (!model) return kExitUsage;
    iev_density* dens = nullptr;
    const iev_status s = iev_solve(model->get(), o.grid_size, o.tol,
                                   o.max_iter, &dens);
    if (s != IEV_OK) return fail_status(s);
    std::unique_ptr<iev_density, decltype(&iev_density_destroy)> dp(
        dens, &iev_density_destroy);

    auto os = open_out(o.out + ".density.csv");
    if (!os) return kExitUsage;
    write_header(*os, o, "solve");
    *os << "M,f_M\n";
    const int n = iev_density_size(dens);
    const double* nodes = iev_density_nodes(dens);
    const double* values = iev_density_values(dens);
    for (int i = 0; i < n; ++i)
        *os << fmt(nodes[i]) << "," << fmt(values[i]) << "\n";

    std::cout << "iterations = " << iev_density_iterations(dens) << "\n";
    std::cout << "residual = " << fmt(iev_density_residual(dens)) << "\n";
    std::cout << "kappa = " << fmt(iev_density_kappa(dens)) << "\n";
    for (double th : sorted_thresholds(o)) {
        double p;
        if (iev_density_outage(dens, th, &p) == IEV_OK)
            std::cout << "P_out(" << fmt(th) << ") = " << fmt(p) << "\n";
    }
    return 0;
}

int run_bounds(const CommonOpts& o) {
    auto model = make_model(o);
    if (!model) return kExitUsage;
    const auto thresholds = sorted_thresholds(o);
    if (thresholds.empty())
        return fail("bounds requires at least one --mth", kExitUsage);

    double ak, kl, ku;
    iev_status s = iev_a_kappa(model->get(), &ak);
    if (s != IEV_OK) return fail_status(s);
    s = iev_kappa_bounds(model->get(), &kl, &ku);
    if (s != IEV_OK) return fail_status(s);

    std::ostringstream body;
    body << "M_th,p_lower,p_upper,p_highsnr,kappa_l,kappa_u,a_kappa\n";
    for (double th : thresholds) {
        double lo, hi, ph;
        int clamped = 0;
        s = iev_outage_bounds(model->get(), th, &lo, &hi, &clamped);
        if (s != IEV_OK) return fail_status(s);
        s = iev_high_snr_outage(model->get(), th, &ph);
        if (s != IEV_OK) return fail_status(s);
        body << fmt(th) << "," << fmt(lo) << "," << fmt(hi) << ","
             << fmt(ph) << "," << fmt(kl) << "," << fmt(ku) << ","
             << fmt(ak) << "\n";
    }
    if (o.out.empty()) {
        write_header(std::cout, o, "bounds");
        std::cout << body.str();
    } else {
        auto os = open_out(o.out + ".bounds.csv");
        if (!os) return kExitUsage;
        write_header(*os, o, "bounds");
        *os << body.str();
    }
    return 0;
}

struct SweepRow {
    double value = 0.0;
    std::optional<double> p_mc, p_density, p_lower, p_upper, p_highsnr;
    std::optional<double> kappa_l, kappa_u, kappa_density;
    iev_status status = IEV_OK;
};

std::string cell(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

// One lambda-sweep point: MC outage, solver outage/kappa, bounds at the
// first threshold.
SweepRow sweep_point_lambda(const CommonOpts& o, double lambda, double th,
                            std::uint64_t point_seed) {
    SweepRow row;
    row.value = lambda;
    iev_model* m = nullptr;
    iev_status s = iev_model_create_rayleigh(o.rho, o.sigma_u2, o.sigma_v2,
                                             lambda, &m);
    if (s != IEV_OK) {
        row.status = s;
        return row;
    }
    ModelPtr mp(m, &iev_model_destroy);

    if (o.steps > 0) {
        iev_trajectory* traj = nullptr;
        s = iev_simulate(m, o.steps, o.burn_in, o.m0, point_seed, &traj);
        if (s == IEV_OK) {
            double p, lo, hi;
            if (iev_trajectory_outage(traj, th, &p, &lo, &hi) == IEV_OK)
                row.p_mc = p;
            iev_trajectory_destroy(traj);
        }
    }

    iev_density* dens = nullptr;
    s = iev_solve(m, o.grid_size, o.tol, o.max_iter, &dens);
    if (s == IEV_OK) {
        double p;
        if (iev_density_outage(dens, th, &p) == IEV_OK) row.p_density = p;
        row.kappa_density = iev_density_kappa(dens);
        iev_density_destroy(dens);
    } else if (s == IEV_ERR_NO_CONVERGENCE) {
        row.status = s;
    }

    double kl, ku;
    if (iev_kappa_bounds(m, &kl, &ku) == IEV_OK) {
        row.kappa_l = kl;
        row.kappa_u = ku;
    }
    double lo, hi, ph;
    int clamped = 0;
    if (th <= o.sigma_u2 &&
        iev_outage_bounds(m, th, &lo, &hi, &clamped) == IEV_OK) {
        row.p_lower = lo;
        row.p_upper = hi;
    }
    if (th <= o.sigma_u2 && iev_high_snr_outage(m, th, &ph) == IEV_OK)
        row.p_highsnr = ph;
    return row;
}

int run_sweep(const CommonOpts& o, const std::string& var,
              std::vector<double> values) {
    if (values.size() < 2)
        return fail("sweep needs at least 2 points", kExitUsage);
    std::sort(values.begin(), values.end());
    std::vector<SweepRow> rows(values.size());

    if (var == "lambda") {
        const double th =
            o.thresholds.empty() ? 0.5 * o.sigma_u2 : o.thresholds.front();
        // Points are independent; run them on a small thread pool and
        // emit rows in sweep order.
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= values.size()) break;
                std::uint64_t point_seed = o.seed + 0x9e37 * (i + 1);
                rows[i] = sweep_point_lambda(o, values[i], th, point_seed);
            }
        };
        const unsigned n_threads = std::min<unsigned>(
            std::max(1u, std::thread::hardware_concurrency()),
            static_cast<unsigned>(values.size()));
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    } else if (var == "mth") {
        auto model = make_model(o);
        if (!model) return kExitUsage;
        iev_trajectory* traj = nullptr;
        if (o.steps > 0)
            iev_simulate(model->get(), o.steps, o.burn_in, o.m0, o.seed,
                         &traj);
        iev_density* dens = nullptr;
        const iev_status s = iev_solve(model->get(), o.grid_size, o.tol,
                                       o.max_iter, &dens);
        if (s != IEV_OK && s != IEV_ERR_NO_CONVERGENCE)
            return fail_status(s);
        double kl = 0, ku = 0;
        const bool have_kb =
            iev_kappa_bounds(model->get(), &kl, &ku) == IEV_OK;
        for (std::size_t i = 0; i < values.size(); ++i) {
            auto& row = rows[i];
            row.value = values[i];
            if (traj) {
                double p, lo, hi;
                if (iev_trajectory_outage(traj, values[i], &p, &lo, &hi) ==
                    IEV_OK)
                    row.p_mc = p;
            }
            if (dens) {
                double p;
                if (iev_density_outage(dens, values[i], &p) == IEV_OK)
                    row.p_density = p;
                row.kappa_density = iev_density_kappa(dens);
            }
            if (have_kb) {
                row.kappa_l = kl;
                row.kappa_u = ku;
            }
            if (values[i] <= o.sigma_u2) {
                double lo, hi, ph;
                int clamped = 0;
                if (iev_outage_bounds(model->get(), values[i], &lo, &hi,
                                      &clamped) == IEV_OK) {
                    row.p_lower = lo;
                    row.p_upper = hi;
                }
                if (iev_high_snr_outage(model->get(), values[i], &ph) ==
                    IEV_OK)
                    row.p_highsnr = ph;
            }
        }
        if (traj) iev_trajectory_destroy(traj);
        if (dens) iev_density_destroy(dens);
        if (s == IEV_ERR_NO_CONVERGENCE) return fail_status(s);
    } else {
        return fail("sweep variable must be 'lambda' or 'mth'", kExitUsage);
    }

    auto os = open_out(o.out + ".sweep.csv");
    if (!os) return kExitUsage;
    write_header(*os, o, "sweep " + var);
    *os << "sweep_var,value,p_mc,p_density,p_lower,p_upper,p_highsnr,"
           "kappa_l,kappa_u,kappa_density\n";
    bool nonconverged = false;
    for (const auto& r : rows) {
        if (r.status == IEV_ERR_NO_CONVERGENCE) nonconverged = true;
        *os << var << "," << fmt(r.value) << "," << cell(r.p_mc) << ","
            << cell(r.p_density) << "," << cell(r.p_lower) << ","
            << cell(r.p_upper) << "," << cell(r.p_highsnr) << ","
            << cell(r.kappa_l) << "," << cell(r.kappa_u) << ","
            << cell(r.kappa_density) << "\n";
    }
    if (nonconverged)
        return fail("one or more sweep points failed to converge",
                    kExitNumerical);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimation error variance outage toolkit: scalar Kalman "
                 "filtering over i.i.d. fading channels"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string sweep_var = "lambda";
    std::vector<double> sweep_values;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_points = 0;
    bool sweep_log = false;

    auto* validate = app.add_subcommand(
        "validate", "check parameters and report m_max");
    add_common(validate, o, false);
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo chain: histogram and outage CSVs");
    add_common(simulate, o, true);
    auto* solve = app.add_subcommand(
        "solve", "stationary density by fixed-point iteration");
    add_common(solve, o, true);
    auto* bounds = app.add_subcommand(
        "bounds", "closed-form kappa/outage bounds and high-SNR law");
    add_common(bounds, o, false);
    auto* sweep = app.add_subcommand(
        "sweep", "long-format CSV over lambda or M_th");
    add_common(sweep, o, true);
    sweep->add_option("--sweep-var", sweep_var, "lambda | mth");
    sweep->add_option("--sweep-values", sweep_values,
                      "explicit sweep points");
    sweep->add_option("--sweep-from", sweep_from, "sweep range start");
    sweep->add_option("--sweep-to", sweep_to, "sweep range end");
    sweep->add_option("--sweep-points", sweep_points, "sweep point count");
    sweep->add_flag("--sweep-log", sweep_log, "log-spaced range");

    // CLI11 only reads config files attached to the top-level app, so a
    // per-subcommand --config is expanded by hand: each key=value line
    // becomes "--key=value" injected right after the subcommand name,
    // skipping keys that were also given explicitly (flags win).
    std::vector<std::string> args(argv + 1, argv + argc);
    {
        std::string cfg;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size())
                cfg = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0)
                cfg = args[i].substr(9);
        }
        if (!cfg.empty()) {
            std::ifstream in(cfg);
            if (!in)
                return fail("cannot read config file: " + cfg, kExitUsage);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string()
                                              : s.substr(a, b - a + 1);
            };
            std::vector<std::string> injected;
            std::string line;
            while (std::getline(in, line)) {
                line = trim(line);
                if (line.empty() || line[0] == '#' || line[0] == ';' ||
                    line[0] == '[')
                    continue;
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    return fail("config line is not key=value: " + line,
                                kExitUsage);
                const std::string key = trim(line.substr(0, eq));
                const std::string val = trim(line.substr(eq + 1));
                if (key.empty())
                    return fail("config line has an empty key: " + line,
                                kExitUsage);
                const std::string flag = "--" + key;
                bool overridden = false;
                for (const auto& a : args)
                    if (a == flag || a.rfind(flag + "=", 0) == 0)
                        overridden = true;
                if (!overridden) injected.push_back(flag + "=" + val);
            }
            if (!args.empty())
                args.insert(args.begin() + 1, injected.begin(),
                            injected.end());
        }
    }

    try {
        std::reverse(args.begin(), args.end());  // parse() expects reversed
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    for (double th : o.thresholds)
        if (!(th > 0.0))
            return fail("thresholds must be > 0", kExitUsage);

    if (validate->parsed()) return run_validate(o);
    if (simulate->parsed()) return run_simulate(o);
    if (solve->parsed()) return run_solve(o);
    if (bounds->parsed()) return run_bounds(o);
    if (sweep->parsed()) {
        if (sweep_values.empty()) {
            if (sweep_points < 2 || !(sweep_to > sweep_from) ||
                (sweep_log && !(sweep_from > 0.0)))
                return fail("provide --sweep-values or a valid "
                            "--sweep-from/--sweep-to/--sweep-points range",
                            kExitUsage);
            for (int i = 0; i < sweep_points; ++i) {
                const double t =
                    static_cast<double>(i) / (sweep_points - 1);
                sweep_values.push_back(
                    sweep_log ? sweep_from *
                                    std::pow(sweep_to / sweep_from, t)
                              : sweep_from + t * (sweep_to - sweep_from));
            }
        }
        return run_sweep(o, sweep_var, sweep_values);
    }
    return kExitUsage;
}

#include "iev/iev.h"

#include "bounds.hpp"
#include "density.hpp"
#include "model.hpp"
#include "montecarlo.hpp"

#include <cstring>
#include <memory>
#include <string>

namespace {

thread_local std::string g_last_error;

iev_status map_code(iev::ErrorCode c) {
    using iev::ErrorCode;
    switch (c) {
        case ErrorCode::Ok: return IEV_OK;
        case ErrorCode::InvalidArgument: return IEV_ERR_INVALID_ARG;
        case ErrorCode::NonPositiveVariance:
            return IEV_ERR_NONPOSITIVE_VARIANCE;
        case ErrorCode::DegenerateChannel: return IEV_ERR_DEGENERATE_CHANNEL;
        case ErrorCode::UnstableSystem: return IEV_ERR_UNSTABLE_SYSTEM;
        case ErrorCode::NoConvergence: return IEV_ERR_NO_CONVERGENCE;
        case ErrorCode::ThresholdAboveBreakpoint:
            return IEV_ERR_THRESHOLD_ABOVE_BREAKPOINT;
        case ErrorCode::InsufficientSamples:
            return IEV_ERR_INSUFFICIENT_SAMPLES;
    }
    return IEV_ERR_INTERNAL;
}

template <typename F>
iev_status guarded(F&& f) {
    try {
        return f();
    } catch (const iev::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return IEV_ERR_INTERNAL;
    }
}

}  // namespace

struct iev_model {
    iev::SystemParams params;
    iev::ChannelModel channel = iev::ChannelModel::rayleigh(1.0);
};

struct iev_trajectory {
    iev::Trajectory traj;
};

struct iev_density {
    iev::DensityGrid grid;
    iev::SolveReport report;
};

extern "C" {

const char* iev_status_message(iev_status s) {
    switch (s) {
        case IEV_OK: return "ok";
        case IEV_ERR_INVALID_ARG: return "invalid argument";
        case IEV_ERR_NONPOSITIVE_VARIANCE:
            return "variance parameters must be strictly positive";
        case IEV_ERR_DEGENERATE_CHANNEL: return "degenerate channel";
        case IEV_ERR_UNSTABLE_SYSTEM:
            return "|rho| >= 1: unbounded support, solver unavailable";
        case IEV_ERR_NO_CONVERGENCE: return "iteration did not converge";
        case IEV_ERR_THRESHOLD_ABOVE_BREAKPOINT:
            return "threshold above sigma_u2: closed form invalid";
        case IEV_ERR_INSUFFICIENT_SAMPLES: return "insufficient samples";
        case IEV_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* iev_last_error(void) { return g_last_error.c_str(); }

iev_status iev_model_create_rayleigh(double rho, double sigma_u2,
                                     double sigma_v2, double lambda,
                                     iev_model** out) {
    if (!out) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        auto m = std::make_unique<iev_model>();
        m->params = {rho, sigma_u2, sigma_v2};
        m->channel = iev::ChannelModel::rayleigh(lambda);
        iev::require_valid(m->params, m->channel);
        *out = m.release();
        return IEV_OK;
    });
}

iev_status iev_model_create_custom(double rho, double sigma_u2,
                                   double sigma_v2, iev_pdf_fn pdf,
                                   void* user, double gamma_max,
                                   iev_model** out) {
    if (!out || !pdf) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        auto m = std::make_unique<iev_model>();
        m->params = {rho, sigma_u2, sigma_v2};
        m->channel = iev::ChannelModel::custom(
            [pdf, user](double g) { return pdf(g, user); }, gamma_max);
        iev::require_valid(m->params, m->channel);
        *out = m.release();
        return IEV_OK;
    });
}

void iev_model_destroy(iev_model* m) { delete m; }

iev_status iev_model_validate(const iev_model* m, char* message_buf,
                              size_t buf_len, int* n_warnings) {
    if (!m) return IEV_ERR_INVALID_ARG;
    const auto r = iev::validate_params(m->params, m->channel);
    std::string msg;
    for (const auto& e : r.errors) msg += "error: " + e.message + "\n";
    for (const auto& w : r.warnings) msg += "warning: " + w.message + "\n";
    if (message_buf && buf_len > 0) {
        std::strncpy(message_buf, msg.c_str(), buf_len - 1);
        message_buf[buf_len - 1] = '\0';
    }
    if (n_warnings) *n_warnings = static_cast<int>(r.warnings.size());
    if (!r.ok()) return map_code(r.errors.front().code);
    return IEV_OK;
}

double iev_model_m_max(const iev_model* m) { return iev::m_max(m->params); }

double iev_model_variance_step(const iev_model* m, double m_prev,
                               double gamma) {
    return iev::variance_step(m_prev, gamma, m->params);
}

iev_status iev_simulate(const iev_model* m, long n_steps, long burn_in,
                        double m0, uint64_t seed, iev_trajectory** out) {
    if (!m || !out) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        auto t = std::make_unique<iev_trajectory>();
        t->traj = iev::simulate_chain(m->params, m->channel, n_steps, m0,
                                      seed, burn_in);
        *out = t.release();
        return IEV_OK;
    });
}

void iev_trajectory_destroy(iev_trajectory* t) { delete t; }

long iev_trajectory_size(const iev_trajectory* t) {
    return static_cast<long>(t->traj.stationary_samples().size());
}

const double* iev_trajectory_data(const iev_trajectory* t) {
    return t->traj.stationary_samples().data();
}

iev_status iev_trajectory_histogram(const iev_trajectory* t, int n_bins,
                                    double* centers, double* densities) {
    if (!t || !centers || !densities) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        const auto h = iev::empirical_distribution(t->traj, n_bins);
        for (int i = 0; i < n_bins; ++i) {
            centers[i] = h.bin_center(static_cast<std::size_t>(i));
            densities[i] = h.density(static_cast<std::size_t>(i));
        }
        return IEV_OK;
    });
}

iev_status iev_trajectory_outage(const iev_trajectory* t, double m_th,
                                 double* p_hat, double* ci_lo,
                                 double* ci_hi) {
    if (!t || !p_hat) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        const auto est = iev::estimate_outage_mc(t->traj, {m_th});
        *p_hat = est[0].p_hat;
        if (ci_lo) *ci_lo = est[0].ci_lo;
        if (ci_hi) *ci_hi = est[0].ci_hi;
        return IEV_OK;
    });
}

iev_status iev_stationarity_check(const iev_model* m, double m0_a,
                                  double m0_b, long n_steps, long burn_in,
                                  uint64_t seed_a, uint64_t seed_b,
                                  int subsample, double* ks) {
    if (!m || !ks) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        *ks = iev::stationarity_check(
            m->params, m->channel, m0_a, m0_b, n_steps, seed_a, seed_b,
            burn_in, subsample > 0 ? subsample : iev::kKsSubsample);
        return IEV_OK;
    });
}

iev_status iev_conditional_mse(const iev_model* m, long n_steps,
                               long n_noise_reps, double m0, uint64_t seed,
                               double* ratios) {
    if (!m || !ratios) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        const auto rows = iev::verify_conditional_mse(
            m->params, m->channel, n_steps, n_noise_reps, m0, seed);
        for (std::size_t i = 0; i < rows.size(); ++i)
            ratios[i] = rows[i].ratio;
        return IEV_OK;
    });
}

iev_status iev_solve(const iev_model* m, int grid_size, double tol,
                     int max_iter, iev_density** out) {
    if (!m || !out) return IEV_ERR_INVALID_ARG;
    return guarded([&]() -> iev_status {
        auto d = std::make_unique<iev_density>();
        auto [grid, report] = iev::solve_stationary(m->params, m->channel,
                                                    tol, max_iter, grid_size);
        d->grid = std::move(grid);
        d->report = report;
        if (!report.converged) {
            g_last_error = "density iteration did not reach tolerance";
            return IEV_ERR_NO_CONVERGENCE;
        }
        *out = d.release();
        return IEV_OK;
    });
}

void iev_density_destroy(iev_density* d) { delete d; }

int iev_density_size(const iev_density* d) {
    return static_cast<int>(d->grid.size());
}
const double* iev_density_nodes(const iev_density* d) {
    return d->grid.nodes.data();
}
const double* iev_density_values(const iev_density* d) {
    return d->grid.values.data();
}
double iev_density_kappa(const iev_density* d) { return d->report.kappa; }
int iev_density_iterations(const iev_density* d) {
    return d->report.iterations;
}
double iev_density_residual(const iev_density* d) {
    return d->report.final_residual;
}

iev_status iev_density_outage(const iev_density* d, double m_th, double* p) {
    if (!d || !p) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        *p = d->grid.outage(m_th);
        return IEV_OK;
    });
}

double iev_density_cdf(const iev_density* d, double m) {
    return d->grid.cdf(m);
}

iev_status iev_a_kappa(const iev_model* m, double* out) {
    if (!m || !out) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        *out = iev::a_kappa(m->params, m->channel.lambda());
        return IEV_OK;
    });
}

iev_status iev_kappa_bounds(const iev_model* m, double* kappa_l,
                            double* kappa_u) {
    if (!m || !kappa_l || !kappa_u) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        const auto b = iev::kappa_bounds(m->params, m->channel.lambda());
        *kappa_l = b.kappa_l;
        *kappa_u = b.kappa_u;
        return IEV_OK;
    });
}

iev_status iev_outage_closed_form(double kappa, double lambda, double m_th,
                                  double sigma_u2, double* p) {
    if (!p) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        *p = iev::outage_closed_form(kappa, lambda, m_th, sigma_u2);
        return IEV_OK;
    });
}

iev_status iev_outage_bounds(const iev_model* m, double m_th, double* lower,
                             double* upper, int* clamped) {
    if (!m || !lower || !upper) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        const auto r =
            iev::outage_bounds(m->params, m->channel.lambda(), m_th);
        *lower = r.lower;
        *upper = r.upper;
        if (clamped) *clamped = r.clamped ? 1 : 0;
        return IEV_OK;
    });
}

iev_status iev_high_snr_outage(const iev_model* m, double m_th, double* p) {
    if (!m || !p) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        *p = iev::high_snr_outage(m->params, m->channel.lambda(), m_th);
        return IEV_OK;
    });
}

iev_status iev_kappa_taylor(double lambda, double sigma_u2, int order,
                            double* out) {
    if (!out) return IEV_ERR_INVALID_ARG;
    return guarded([&] {
        *out = iev::kappa_taylor(lambda, sigma_u2, order);
        return IEV_OK;
    });
}

}  // extern "C"

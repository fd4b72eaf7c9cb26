/* C interface for the IEV (instantaneous estimation error variance)
 * library: Kalman filtering of a scalar Gauss-Markov signal over an
 * i.i.d. fading channel, with Monte Carlo simulation, a stationary
 * density solver, and closed-form outage bounds.
 *
 * All objects are opaque handles; every fallible call returns an
 * iev_status. Handles are not thread-safe individually, but distinct
 * handles may be used from distinct threads.
 */
#ifndef IEV_H
#define IEV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iev_status {
    IEV_OK = 0,
    IEV_ERR_INVALID_ARG = 1,
    IEV_ERR_NONPOSITIVE_VARIANCE = 2,
    IEV_ERR_DEGENERATE_CHANNEL = 3,
    IEV_ERR_UNSTABLE_SYSTEM = 4,
    IEV_ERR_NO_CONVERGENCE = 5,
    IEV_ERR_THRESHOLD_ABOVE_BREAKPOINT = 6,
    IEV_ERR_INSUFFICIENT_SAMPLES = 7,
    IEV_ERR_INTERNAL = 8
} iev_status;

/* Static description of a status code. */
const char* iev_status_message(iev_status s);

/* Message of the most recent failure on this thread (empty if none). */
const char* iev_last_error(void);

/* ---- model ---------------------------------------------------------- */

/* System + Rayleigh channel; lambda is the SNR-exponential rate
 * (1 / mean SNR). */
typedef struct iev_model iev_model;

iev_status iev_model_create_rayleigh(double rho, double sigma_u2,
                                     double sigma_v2, double lambda,
                                     iev_model** out);

/* Custom SNR density on [0, gamma_max]; pdf(gamma, user) must be
 * nonnegative. Sampling uses a tabulated inverse CDF. */
typedef double (*iev_pdf_fn)(double gamma, void* user);
iev_status iev_model_create_custom(double rho, double sigma_u2,
                                   double sigma_v2, iev_pdf_fn pdf,
                                   void* user, double gamma_max,
                                   iev_model** out);

void iev_model_destroy(iev_model* m);

/* Validation report: returns IEV_OK when usable; warnings (e.g. rho = 0)
 * are reported through the counter and message buffer either way. */
iev_status iev_model_validate(const iev_model* m, char* message_buf,
                              size_t buf_len, int* n_warnings);

double iev_model_m_max(const iev_model* m);
double iev_model_variance_step(const iev_model* m, double m_prev,
                               double gamma);

/* ---- Monte Carlo ----------------------------------------------------- */

typedef struct iev_trajectory iev_trajectory;

iev_status iev_simulate(const iev_model* m, long n_steps, long burn_in,
                        double m0, uint64_t seed, iev_trajectory** out);
void iev_trajectory_destroy(iev_trajectory* t);

/* Post-burn-in sample count / data. */
long iev_trajectory_size(const iev_trajectory* t);
const double* iev_trajectory_data(const iev_trajectory* t);

/* Histogram with an edge pinned at sigma_u2; centers/densities must hold
 * n_bins entries. */
iev_status iev_trajectory_histogram(const iev_trajectory* t, int n_bins,
                                    double* centers, double* densities);

/* Outage fraction >= m_th with a batch-means 95% CI. */
iev_status iev_trajectory_outage(const iev_trajectory* t, double m_th,
                                 double* p_hat, double* ci_lo,
                                 double* ci_hi);

/* Two-sample KS between chains from two initial conditions (thinned by
 * `subsample` before comparison; pass 0 for the default). */
iev_status iev_stationarity_check(const iev_model* m, double m0_a,
                                  double m0_b, long n_steps, long burn_in,
                                  uint64_t seed_a, uint64_t seed_b,
                                  int subsample, double* ks);

/* Ratio realized_mse(n)/M(n) over one frozen channel path; `ratios` must
 * hold n_steps entries. */
iev_status iev_conditional_mse(const iev_model* m, long n_steps,
                               long n_noise_reps, double m0, uint64_t seed,
                               double* ratios);

/* ---- stationary density solver -------------------------------------- */

typedef struct iev_density iev_density;

iev_status iev_solve(const iev_model* m, int grid_size, double tol,
                     int max_iter, iev_density** out);
void iev_density_destroy(iev_density* d);

int iev_density_size(const iev_density* d);
const double* iev_density_nodes(const iev_density* d);
const double* iev_density_values(const iev_density* d);
double iev_density_kappa(const iev_density* d);
int iev_density_iterations(const iev_density* d);
double iev_density_residual(const iev_density* d);
iev_status iev_density_outage(const iev_density* d, double m_th, double* p);
double iev_density_cdf(const iev_density* d, double m);

/* ---- closed-form bounds (Rayleigh only) ------------------------------ */

iev_status iev_a_kappa(const iev_model* m, double* out);
iev_status iev_kappa_bounds(const iev_model* m, double* kappa_l,
                            double* kappa_u);
iev_status iev_outage_closed_form(double kappa, double lambda, double m_th,
                                  double sigma_u2, double* p);
/* clamped (out param) reports whether the raw formulas left [0, 1]. */
iev_status iev_outage_bounds(const iev_model* m, double m_th, double* lower,
                             double* upper, int* clamped);
iev_status iev_high_snr_outage(const iev_model* m, double m_th, double* p);
iev_status iev_kappa_taylor(double lambda, double sigma_u2, int order,
                            double* out);

#ifdef __cplusplus
}
#endif

#endif /* IEV_H */

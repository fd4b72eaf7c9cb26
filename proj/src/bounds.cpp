#include "bounds.hpp"

#include "model.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace iev {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0))
        throw Error(ErrorCode::InvalidArgument,
                    "lambda must be > 0 (limits are exposed through "
                    "kappa_taylor)");
}

void check_threshold(double m_th, double sigma_u2) {
    if (!(m_th > 0.0))
        throw Error(ErrorCode::InvalidArgument, "m_th must be > 0");
    if (m_th > sigma_u2)
        throw Error(ErrorCode::ThresholdAboveBreakpoint,
                    "closed form holds for m_th <= sigma_u2 only; use the "
                    "density solver above the break point");
}

}  // namespace

double a_kappa(const SystemParams& params, double lambda) {
    check_lambda(lambda);
    require_valid(params, ChannelModel::rayleigh(lambda));
    const double su2 = params.sigma_u2;
    const double rho2 = params.rho * params.rho;
    if (rho2 == 0.0) return 0.0;  // exponent constant, integral telescopes

    // t = lambda/m maps (0, su2] to [t0, inf); integrand e^{-t}
    // exp(lambda/(rho^2 lambda/t + su2)).
    const double t0 = lambda / su2;
    auto integrand = [&](double t) {
        return std::exp(-t) * std::exp(lambda / (rho2 * lambda / t + su2));
    };
    const double cutoff = t0 + 80.0;  // e^{-80} tail, appended analytically
    double integral = adaptive_simpson(integrand, t0, cutoff, 1e-13);
    integral += std::exp(lambda / su2) * std::exp(-cutoff);
    return 1.0 - integral;
}

KappaBounds kappa_bounds(const SystemParams& params, double lambda) {
    check_lambda(lambda);
    KappaBounds b;
    b.lambda = lambda;
    b.a_kappa = a_kappa(params, lambda);
    const double su2 = params.sigma_u2;
    const double e_break = std::exp(-lambda / su2);
    b.kappa_u =
        1.0 / (b.a_kappa * std::exp(-lambda / (su2 * (1.0 + params.rho * params.rho))) +
               e_break);
    if (params.stable()) {
        b.variant = KappaVariant::StableB;
        // rho^2 M_max + su2 == M_max for a stable system
        b.kappa_l = 1.0 / (b.a_kappa * std::exp(-lambda / m_max(params)) +
                           e_break);
    } else {
        b.variant = KappaVariant::UnstableInf;
        b.kappa_l = 1.0 / (b.a_kappa + e_break);
    }
    return b;
}

double outage_closed_form(double kappa, double lambda, double m_th,
                          double sigma_u2) {
    check_lambda(lambda);
    check_threshold(m_th, sigma_u2);
    return std::clamp(1.0 - kappa * std::exp(-lambda / m_th), 0.0, 1.0);
}

OutageBoundsResult outage_bounds(const SystemParams& params, double lambda,
                                 double m_th) {
    check_lambda(lambda);
    check_threshold(m_th, params.sigma_u2);
    const KappaBounds kb = kappa_bounds(params, lambda);
    const double e_th = std::exp(-lambda / m_th);
    OutageBoundsResult r;
    const double raw_lo = 1.0 - kb.kappa_u * e_th;
    const double raw_hi = 1.0 - kb.kappa_l * e_th;
    r.clamped = raw_lo < 0.0 || raw_hi > 1.0;
    r.lower = std::clamp(raw_lo, 0.0, 1.0);
    r.upper = std::clamp(raw_hi, 0.0, 1.0);
    return r;
}

double high_snr_outage(const SystemParams& params, double lambda,
                       double m_th) {
    check_lambda(lambda);
    check_threshold(m_th, params.sigma_u2);
    return std::max(0.0, (1.0 / m_th - 1.0 / params.sigma_u2) * lambda);
}

double kappa_taylor(double lambda, double sigma_u2, int order) {
    if (order < 0)
        throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    double term = 1.0, sum = 1.0;
    for (int l = 1; l <= order; ++l) {
        term *= lambda / (sigma_u2 * l);
        sum += term;
    }
    return sum;
}

}  // namespace iev

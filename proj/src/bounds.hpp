#ifndef IEV_BOUNDS_HPP
#define IEV_BOUNDS_HPP

#include "types.hpp"

namespace iev {

enum class KappaVariant { StableB, UnstableInf };

struct KappaBounds {
    double kappa_l = 1.0;
    double kappa_u = 1.0;
    KappaVariant variant = KappaVariant::StableB;
    double a_kappa = 0.0;
    double lambda = 0.0;
};

struct OutageBoundsResult {
    double lower = 0.0;
    double upper = 0.0;
    bool clamped = false;  // raw formula left [0, 1] (low SNR regime)
};

/// a_kappa = 1 - int_0^{su2} exp(lambda/(rho^2 m + su2)) (lambda/m^2)
/// e^{-lambda/m} dm, evaluated after the substitution t = lambda/m.
/// The integrand has an O(lambda) boundary layer at m -> 0; the
/// substitution turns it into a plain e^{-t} tail integral.
double a_kappa(const SystemParams& params, double lambda);

KappaBounds kappa_bounds(const SystemParams& params, double lambda);

/// P_out = 1 - kappa e^{-lambda/M_th}, valid for M_th <= sigma_u2 only.
double outage_closed_form(double kappa, double lambda, double m_th,
                          double sigma_u2);

OutageBoundsResult outage_bounds(const SystemParams& params, double lambda,
                                 double m_th);

/// High-SNR law P_out ~ (1/M_th - 1/sigma_u2) * lambda.
double high_snr_outage(const SystemParams& params, double lambda,
                       double m_th);

/// Partial sum of kappa's series around lambda = 0: sum_l lambda^l /
/// (l! sigma_u2^l), i.e. the series of e^{lambda/sigma_u2}.
double kappa_taylor(double lambda, double sigma_u2, int order);

}  // namespace iev

#endif

#ifndef IEV_MODEL_HPP
#define IEV_MODEL_HPP

#include "rng.hpp"
#include "types.hpp"

#include <limits>

namespace iev {

ValidationResult validate_params(const SystemParams& params,
                                 const ChannelModel& channel);

/// Throws on validation errors; warnings are ignored.
void require_valid(const SystemParams& params, const ChannelModel& channel);

/// Supremum of the error-variance support: sigma_u2/(1-rho^2) for a
/// stable system, +inf otherwise.
inline double m_max(const SystemParams& p) {
    if (!p.stable()) return std::numeric_limits<double>::infinity();
    return p.sigma_u2 / (1.0 - p.rho * p.rho);
}

/// One step of the random Riccati recursion for the estimation error
/// variance, gamma being the instantaneous SNR.
inline double variance_step(double m_prev, double gamma,
                            const SystemParams& p) {
    const double pred = p.rho * p.rho * m_prev + p.sigma_u2;
    return pred / (1.0 + gamma * pred);
}

/// Full scalar Kalman update for one measurement y = h*x + v.
FilterState kalman_step(const FilterState& state, std::complex<double> y,
                        std::complex<double> h, const SystemParams& p);

inline double sample_snr(const ChannelModel& channel, Rng& rng) {
    return channel.sample(rng);
}

}  // namespace iev

#endif

#ifndef IEV_DENSITY_HPP
#define IEV_DENSITY_HPP

#include "types.hpp"

#include <cstddef>
#include <vector>

namespace iev {

/// Discretized pdf of the stationary error variance on (eps, M_max]:
/// log-spaced nodes up to the break point sigma_u2 (boundary layer of
/// exp(-lambda/M) near zero), linear nodes above it, the break point being
/// a node exactly. Quadrature weights: trapezoid on the log branch,
/// composite Simpson on the linear branch.
struct DensityGrid {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> weights;
    std::size_t break_index = 0;  // nodes[break_index] == sigma_u2
    double eps = 0.0;
    double support_max = 0.0;
    SystemParams params;

    std::size_t size() const { return nodes.size(); }
    /// Integral of the density against the quadrature weights.
    double mass() const;
    /// P(M >= m_th), suffix integral with interpolation at m_th.
    double outage(double m_th) const;
    double cdf(double m) const { return 1.0 - outage(m); }
    /// Linear interpolation of the density (0 outside the support).
    double at(double m) const;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    double kappa = 0.0;
    bool converged = false;
    double mass_defect = 0.0;  // pre-normalization |mass - 1| of last step
};

DensityGrid build_grid(const SystemParams& params,
                       const ChannelModel& channel, int n_nodes);

/// One application of the stationary-density transfer operator, result
/// renormalized to unit mass. mass_defect, when given, receives the
/// pre-normalization |mass - 1|.
void apply_transfer_operator(DensityGrid& density,
                             const ChannelModel& channel,
                             double* mass_defect = nullptr);

std::pair<DensityGrid, SolveReport> solve_stationary(
    const SystemParams& params, const ChannelModel& channel,
    double tol = 1e-10, int max_iter = 10000, int n_nodes = 1024);

/// kappa = int exp(lambda/(rho^2 m + sigma_u2)) f(m) dm (Rayleigh only).
double kappa_from_density(const DensityGrid& density,
                          const SystemParams& params, double lambda);

inline double outage_from_density(const DensityGrid& density, double m_th) {
    return density.outage(m_th);
}

}  // namespace iev

#endif

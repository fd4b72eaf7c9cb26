#ifndef IEV_MONTECARLO_HPP
#define IEV_MONTECARLO_HPP

#include "model.hpp"
#include "stats.hpp"
#include "types.hpp"

#include <cstdint>
#include <vector>

namespace iev {

struct Trajectory {
    std::vector<double> values;  // M(1) .. M(n_steps), burn-in included
    long burn_in = 0;
    std::uint64_t seed = 0;
    SystemParams params;
    ChannelModel channel = ChannelModel::rayleigh(1.0);

    std::span<const double> stationary_samples() const {
        return {values.data() + burn_in, values.size() - burn_in};
    }
};

struct OutageEstimate {
    double m_th = 0.0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct ConditionalMseRow {
    double M = 0.0;            // filter-reported IEV at step n
    double realized_mse = 0.0; // noise-averaged squared error at step n
    double ratio = 0.0;
};

constexpr long kDefaultBurnIn = 1000;
constexpr long kBatchLength = 1000;     // batch-means CI batches
constexpr int kKsSubsample = 10;        // thinning for KS on dependent chains

Trajectory simulate_chain(const SystemParams& params,
                          const ChannelModel& channel, long n_steps,
                          double m0, std::uint64_t seed,
                          long burn_in = kDefaultBurnIn);

EmpiricalDistribution empirical_distribution(const Trajectory& traj,
                                             int n_bins);

/// Outage fraction with a 95% CI from batch means (chain samples are
/// dependent; a naive binomial CI would overstate precision).
std::vector<OutageEstimate> estimate_outage_mc(
    const Trajectory& traj, const std::vector<double>& thresholds);

/// Freezes one channel path and replays many independent noise
/// realizations through the full Kalman filter; the filter-reported M(n)
/// must match the realized conditional MSE.
std::vector<ConditionalMseRow> verify_conditional_mse(
    const SystemParams& params, const ChannelModel& channel, long n_steps,
    long n_noise_reps, double m0, std::uint64_t seed);

/// Two-sample KS between chains started from different M(0); thinned by
/// `subsample` to reduce serial dependence.
double stationarity_check(const SystemParams& params,
                          const ChannelModel& channel, double m0_a,
                          double m0_b, long n_steps, std::uint64_t seed_a,
                          std::uint64_t seed_b,
                          long burn_in = kDefaultBurnIn,
                          int subsample = kKsSubsample);

}  // namespace iev

#endif

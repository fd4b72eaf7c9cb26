#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>

namespace iev {

Trajectory simulate_chain(const SystemParams& params,
                          const ChannelModel& channel, long n_steps,
                          double m0, std::uint64_t seed, long burn_in) {
    require_valid(params, channel);
    if (n_steps < 1)
        throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
    if (!(m0 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "m0 must be > 0");
    if (burn_in < 0 || burn_in >= n_steps)
        throw Error(ErrorCode::InvalidArgument,
                    "need 0 <= burn_in < n_steps");

    Trajectory traj;
    traj.burn_in = burn_in;
    traj.seed = seed;
    traj.params = params;
    traj.channel = channel;
    traj.values.resize(static_cast<std::size_t>(n_steps));

    Rng rng(seed);
    double m = m0;
    for (auto& v : traj.values) {
        m = variance_step(m, channel.sample(rng), params);
        v = m;
    }
    return traj;
}

EmpiricalDistribution empirical_distribution(const Trajectory& traj,
                                             int n_bins) {
    const auto samples = traj.stationary_samples();
    if (static_cast<long>(samples.size()) < n_bins)
        throw Error(ErrorCode::InsufficientSamples,
                    "trajectory too short for requested bin count");
    return make_histogram(samples, n_bins, traj.params.sigma_u2,
                          m_max(traj.params));
}

std::vector<OutageEstimate> estimate_outage_mc(
    const Trajectory& traj, const std::vector<double>& thresholds) {
    const auto samples = traj.stationary_samples();
    const long n = static_cast<long>(samples.size());
    const long batch = std::min(kBatchLength, std::max<long>(1, n / 2));
    const long n_batches = n / batch;

    std::vector<OutageEstimate> out;
    out.reserve(thresholds.size());
    for (double th : thresholds) {
        if (!(th > 0.0))
            throw Error(ErrorCode::InvalidArgument, "threshold must be > 0");
        long hits = 0;
        for (double s : samples) hits += (s >= th);
        const double p = static_cast<double>(hits) / static_cast<double>(n);

        // batch means variance of the outage indicator
        double var_bm = 0.0;
        if (n_batches >= 2) {
            double sum = 0.0, sum2 = 0.0;
            for (long b = 0; b < n_batches; ++b) {
                long h = 0;
                for (long i = b * batch; i < (b + 1) * batch; ++i)
                    h += (samples[static_cast<std::size_t>(i)] >= th);
                const double pb = static_cast<double>(h) / static_cast<double>(batch);
                sum += pb;
                sum2 += pb * pb;
            }
            const double nb = static_cast<double>(n_batches);
            const double mean = sum / nb;
            var_bm = (sum2 / nb - mean * mean) / (nb - 1.0);
        }
        double half = 1.96 * std::sqrt(var_bm);
        // Degenerate case: no hits (or all hits) makes the batch-means
        // variance vanish, but the event probability is only known to be
        // below ~3/n (rule of three), not zero; a point interval would be
        // wrong.
        if (hits == 0 || hits == n)
            half = std::max(half, 3.0 / static_cast<double>(n));
        out.push_back({th, p, std::max(0.0, p - half), std::min(1.0, p + half)});
    }
    return out;
}

std::vector<ConditionalMseRow> verify_conditional_mse(
    const SystemParams& params, const ChannelModel& channel, long n_steps,
    long n_noise_reps, double m0, std::uint64_t seed) {
    require_valid(params, channel);
    if (n_noise_reps < 100)
        throw Error(ErrorCode::InvalidArgument, "need n_noise_reps >= 100");

    // One frozen channel path; the phase is irrelevant for M(n) but is
    // randomized to exercise the complex arithmetic.
    Rng ch_rng(seed);
    std::vector<std::complex<double>> h(static_cast<std::size_t>(n_steps));
    for (auto& hk : h) {
        const double gamma = channel.sample(ch_rng);
        const double mag = std::sqrt(gamma * params.sigma_v2);
        const double phase = 2.0 * M_PI * ch_rng.uniform();
        hk = std::polar(mag, phase);
    }

    // Filter-reported IEV along that path.
    std::vector<ConditionalMseRow> rows(static_cast<std::size_t>(n_steps));
    {
        double m = m0;
        for (long n = 0; n < n_steps; ++n) {
            m = variance_step(m, std::norm(h[static_cast<std::size_t>(n)]) /
                                     params.sigma_v2,
                              params);
            rows[static_cast<std::size_t>(n)].M = m;
        }
    }

    Rng noise_rng(Rng::derive_seed(seed, 1));
    for (long rep = 0; rep < n_noise_reps; ++rep) {
        std::complex<double> x = noise_rng.complex_normal(m0);
        FilterState st{{0.0, 0.0}, m0, 0};
        for (long n = 0; n < n_steps; ++n) {
            const auto& hk = h[static_cast<std::size_t>(n)];
            x = params.rho * x + noise_rng.complex_normal(params.sigma_u2);
            const std::complex<double> y =
                hk * x + noise_rng.complex_normal(params.sigma_v2);
            st = kalman_step(st, y, hk, params);
            rows[static_cast<std::size_t>(n)].realized_mse +=
                std::norm(x - st.x_hat);
        }
    }
    for (auto& r : rows) {
        r.realized_mse /= static_cast<double>(n_noise_reps);
        r.ratio = r.realized_mse / r.M;
    }
    return rows;
}

double stationarity_check(const SystemParams& params,
                          const ChannelModel& channel, double m0_a,
                          double m0_b, long n_steps, std::uint64_t seed_a,
                          std::uint64_t seed_b, long burn_in, int subsample) {
    const auto ta = simulate_chain(params, channel, n_steps, m0_a, seed_a,
                                   burn_in);
    const auto tb = simulate_chain(params, channel, n_steps, m0_b, seed_b,
                                   burn_in);
    auto thin = [subsample](std::span<const double> s) {
        std::vector<double> out;
        out.reserve(s.size() / static_cast<std::size_t>(subsample) + 1);
        for (std::size_t i = 0; i < s.size();
             i += static_cast<std::size_t>(subsample))
            out.push_back(s[i]);
        return out;
    };
    return ks_two_sample(thin(ta.stationary_samples()),
                         thin(tb.stationary_samples()));
}

}  // namespace iev

#include "model.hpp"

#include <algorithm>
#include <cmath>

namespace iev {

ChannelModel ChannelModel::rayleigh(double lambda) {
    if (!(lambda > 0.0))
        throw Error(ErrorCode::InvalidArgument, "rayleigh: lambda must be > 0");
    ChannelModel c;
    c.rayleigh_ = true;
    c.lambda_ = lambda;
    return c;
}

ChannelModel ChannelModel::custom(std::function<double(double)> pdf,
                                  double gamma_max, int table_size) {
    if (!pdf || !(gamma_max > 0.0) || table_size < 16)
        throw Error(ErrorCode::InvalidArgument, "custom channel: bad arguments");
    ChannelModel c;
    c.rayleigh_ = false;
    c.custom_pdf_ = std::move(pdf);
    c.gamma_max_ = gamma_max;

    // Tabulate the CDF by trapezoid on a uniform grid, then invert onto a
    // uniform probability grid for inverse-CDF sampling.
    const int n = table_size;
    std::vector<double> g(n + 1), cdf(n + 1);
    const double h = gamma_max / n;
    double mass = 0.0;
    double prev = c.custom_pdf_(0.0);
    cdf[0] = 0.0;
    g[0] = 0.0;
    for (int i = 1; i <= n; ++i) {
        g[i] = i * h;
        const double cur = c.custom_pdf_(g[i]);
        if (cur < 0.0 || prev < 0.0)
            throw Error(ErrorCode::InvalidArgument,
                        "custom channel: density must be nonnegative");
        mass += 0.5 * (prev + cur) * h;
        cdf[i] = mass;
        prev = cur;
    }
    if (!(mass > 0.0))
        throw Error(ErrorCode::DegenerateChannel,
                    "custom channel: density has zero mass");
    for (auto& v : cdf) v /= mass;

    c.inv_cdf_.resize(n + 1);
    int j = 0;
    for (int i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        while (j < n && cdf[j + 1] < u) ++j;
        const double c0 = cdf[j], c1 = cdf[std::min(j + 1, n)];
        double t = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
        c.inv_cdf_[i] = g[j] + t * h;
    }
    c.inv_cdf_.back() = gamma_max;
    // average SNR for reporting; lambda_ kept as 1/mean analogue
    double mean = 0.0;
    prev = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double cur = g[i] * c.custom_pdf_(g[i]) / mass;
        mean += 0.5 * (prev + cur) * h;
        prev = cur;
    }
    c.lambda_ = mean > 0.0 ? 1.0 / mean : 0.0;
    return c;
}

double ChannelModel::pdf(double gamma) const {
    if (gamma < 0.0) return 0.0;
    if (rayleigh_) return lambda_ * std::exp(-lambda_ * gamma);
    if (gamma > gamma_max_) return 0.0;
    return custom_pdf_(gamma);
}

double ChannelModel::sample(Rng& rng) const {
    if (rayleigh_) return rng.exponential(lambda_);
    const double u = rng.uniform();
    const double pos = u * (inv_cdf_.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= inv_cdf_.size()) return inv_cdf_.back();
    const double t = pos - static_cast<double>(i);
    return inv_cdf_[i] + t * (inv_cdf_[i + 1] - inv_cdf_[i]);
}

double ChannelModel::mean_snr() const {
    return lambda_ > 0.0 ? 1.0 / lambda_ : 0.0;
}

ValidationResult validate_params(const SystemParams& params,
                                 const ChannelModel& channel) {
    ValidationResult r;
    if (!(params.sigma_u2 > 0.0))
        r.errors.push_back({ErrorCode::NonPositiveVariance,
                            "sigma_u2 must be strictly positive"});
    if (!(params.sigma_v2 > 0.0))
        r.errors.push_back({ErrorCode::NonPositiveVariance,
                            "sigma_v2 must be strictly positive"});
    if (channel.is_rayleigh() && !(channel.lambda() > 0.0))
        r.errors.push_back({ErrorCode::DegenerateChannel,
                            "Rayleigh channel requires lambda > 0"});
    if (params.rho == 0.0)
        r.warnings.push_back(
            {ErrorCode::InvalidArgument,
             "rho = 0: stationary-density theory assumes rho != 0; "
             "simulation and closed-form checks remain valid"});
    return r;
}

void require_valid(const SystemParams& params, const ChannelModel& channel) {
    const auto r = validate_params(params, channel);
    if (!r.ok()) throw Error(r.errors.front().code, r.errors.front().message);
}

FilterState kalman_step(const FilterState& state, std::complex<double> y,
                        std::complex<double> h, const SystemParams& p) {
    FilterState next;
    const std::complex<double> x_pred = p.rho * state.x_hat;
    const double pred_var = p.rho * p.rho * state.M + p.sigma_u2;
    const double h2 = std::norm(h);
    const std::complex<double> gain =
        pred_var * std::conj(h) / (p.sigma_v2 + h2 * pred_var);
    next.x_hat = x_pred + gain * (y - h * x_pred);
    next.M = pred_var * p.sigma_v2 / (p.sigma_v2 + h2 * pred_var);
    next.step_index = state.step_index + 1;
    return next;
}

}  // namespace iev

#ifndef IEV_TYPES_HPP
#define IEV_TYPES_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iev {

enum class ErrorCode {
    Ok = 0,
    InvalidArgument,
    NonPositiveVariance,
    DegenerateChannel,
    UnstableSystem,
    NoConvergence,
    ThresholdAboveBreakpoint,
    InsufficientSamples,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// First-order Gauss-Markov process plus measurement noise.
struct SystemParams {
    double rho = 0.0;       // process correlation coefficient
    double sigma_u2 = 1.0;  // process noise variance
    double sigma_v2 = 1.0;  // measurement noise variance

    bool stable() const { return std::abs(rho) < 1.0; }
};

class Rng;

/// Distribution of the instantaneous SNR gamma(n) = |h(n)|^2 / sigma_v2.
/// Rayleigh fading gives an exponential SNR with rate lambda = 1/E[gamma];
/// a custom density on [0, gamma_max] is sampled through a tabulated
/// inverse CDF.
class ChannelModel {
public:
    static ChannelModel rayleigh(double lambda);
    static ChannelModel custom(std::function<double(double)> pdf,
                               double gamma_max, int table_size = 4096);

    bool is_rayleigh() const { return rayleigh_; }
    double lambda() const { return lambda_; }

    double pdf(double gamma) const;
    double sample(Rng& rng) const;
    double mean_snr() const;

private:
    ChannelModel() = default;

    bool rayleigh_ = true;
    double lambda_ = 1.0;
    std::function<double(double)> custom_pdf_;
    double gamma_max_ = 0.0;
    std::vector<double> inv_cdf_;  // inverse CDF table on a uniform u-grid
};

/// A-posteriori filter state; M is the instantaneous estimation error
/// variance conditional on the channel path.
struct FilterState {
    std::complex<double> x_hat{0.0, 0.0};
    double M = 1.0;
    long step_index = 0;
};

struct ValidationIssue {
    ErrorCode code;
    std::string message;
};

struct ValidationResult {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;

    bool ok() const { return errors.empty(); }
};

}  // namespace iev

#endif

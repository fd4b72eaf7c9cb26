#ifndef IEV_RNG_HPP
#define IEV_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace iev {

/// Deterministic generator: mt19937_64 with explicit inverse-CDF /
/// Box-Muller transforms so that sequences are identical across
/// standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return -std::log(u) / rate;
    }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 == 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * M_PI * u2);
        have_cached_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Circularly symmetric complex Gaussian with total variance var.
    std::complex<double> complex_normal(double var) {
        const double s = std::sqrt(var / 2.0);
        return {s * normal(), s * normal()};
    }

    /// Seed for the k-th derived stream (splitmix64 of master ^ index).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (k + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace iev

#endif

#ifndef IEV_STATS_HPP
#define IEV_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace iev {

/// Histogram with one edge pinned at a prescribed break point; fixed bin
/// width within each of the two branches.
struct EmpiricalDistribution {
    std::vector<double> bin_edges;  // ascending, size = counts.size() + 1
    std::vector<long> counts;
    long total = 0;

    double bin_center(std::size_t i) const {
        return 0.5 * (bin_edges[i] + bin_edges[i + 1]);
    }
    double density(std::size_t i) const {
        const double w = bin_edges[i + 1] - bin_edges[i];
        return total > 0 && w > 0.0
                   ? static_cast<double>(counts[i]) / (static_cast<double>(total) * w)
                   : 0.0;
    }
    /// Right-continuous ECDF of the binned data, evaluated at x.
    double ecdf(double x) const;
};

EmpiricalDistribution make_histogram(std::span<const double> samples,
                                     int n_bins, double break_point,
                                     double support_max);

/// Two-sample Kolmogorov-Smirnov statistic (samples need not be sorted).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// KS distance between a sample and a continuous CDF.
double ks_vs_cdf(std::vector<double> samples,
                 const std::function<double(double)>& cdf);

}  // namespace iev

#endif

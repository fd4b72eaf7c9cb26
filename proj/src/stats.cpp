#include "stats.hpp"

#include "types.hpp"

#include <algorithm>
#include <cmath>

namespace iev {

double EmpiricalDistribution::ecdf(double x) const {
    if (total == 0) return 0.0;
    long below = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (bin_edges[i + 1] <= x)
            below += counts[i];
        else
            break;
    }
    return static_cast<double>(below) / static_cast<double>(total);
}

EmpiricalDistribution make_histogram(std::span<const double> samples,
                                     int n_bins, double break_point,
                                     double support_max) {
    if (n_bins < 2)
        throw Error(ErrorCode::InvalidArgument, "histogram needs >= 2 bins");
    if (static_cast<long>(samples.size()) < n_bins)
        throw Error(ErrorCode::InsufficientSamples,
                    "fewer samples than bins");

    double hi = 0.0;
    for (double s : samples) hi = std::max(hi, s);
    hi = std::min(hi, support_max);
    hi = std::max(hi, break_point);  // keep both branches representable

    // Split bins between the two branches proportionally to branch width,
    // at least one bin each; the break point is an exact edge.
    EmpiricalDistribution h;
    const double w1 = break_point, w2 = hi - break_point;
    int n1 = n_bins;
    int n2 = 0;
    if (w2 > 0.0) {
        n1 = std::clamp(
            static_cast<int>(std::lround(n_bins * w1 / (w1 + w2))), 1,
            n_bins - 1);
        n2 = n_bins - n1;
    }
    h.bin_edges.reserve(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n1; ++i)
        h.bin_edges.push_back(w1 * i / n1);
    for (int i = 1; i <= n2; ++i)
        h.bin_edges.push_back(break_point + w2 * i / n2);
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);

    for (double s : samples) {
        if (s < 0.0) continue;
        int idx;
        if (s <= break_point) {
            idx = std::min(static_cast<int>(s / w1 * n1), n1 - 1);
        } else if (n2 > 0 && s <= hi) {
            idx = n1 + std::min(static_cast<int>((s - break_point) / w2 * n2),
                                n2 - 1);
        } else {
            continue;  // above recorded support
        }
        ++h.counts[static_cast<std::size_t>(idx)];
        ++h.total;
    }
    return h;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }
    return d;
}

double ks_vs_cdf(std::vector<double> samples,
                 const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace iev

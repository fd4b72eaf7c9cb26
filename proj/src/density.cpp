#include "density.hpp"

#include "model.hpp"

#include <algorithm>
#include <cmath>

namespace iev {

namespace {

// Suffix trapezoid sums of an integrand tabulated on the grid nodes,
// with linear interpolation when the lower limit falls between nodes.
class SuffixIntegral {
public:
    SuffixIntegral(const std::vector<double>& nodes,
                   const std::vector<double>& g)
        : nodes_(nodes), g_(g), suffix_(nodes.size(), 0.0) {
        for (std::size_t i = nodes.size() - 1; i-- > 0;) {
            suffix_[i] = suffix_[i + 1] + 0.5 * (g_[i] + g_[i + 1]) *
                                              (nodes_[i + 1] - nodes_[i]);
        }
    }

    double from(double c) const {
        if (c <= nodes_.front()) return suffix_.front();
        if (c >= nodes_.back()) return 0.0;
        const auto it =
            std::upper_bound(nodes_.begin(), nodes_.end(), c);
        const std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        const double t = (c - nodes_[j]) / (nodes_[j + 1] - nodes_[j]);
        const double gc = g_[j] + t * (g_[j + 1] - g_[j]);
        return suffix_[j + 1] +
               0.5 * (gc + g_[j + 1]) * (nodes_[j + 1] - c);
    }

    double total() const { return suffix_.front(); }

private:
    const std::vector<double>& nodes_;
    const std::vector<double>& g_;
    std::vector<double> suffix_;
};

}  // namespace

double DensityGrid::mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * values[i];
    return s;
}

double DensityGrid::outage(double m_th) const {
    if (!(m_th > 0.0))
        throw Error(ErrorCode::InvalidArgument, "m_th must be > 0");
    SuffixIntegral s(nodes, values);
    const double total = s.total();
    if (total <= 0.0) return 0.0;
    if (m_th <= nodes.front()) return 1.0;
    return std::clamp(s.from(m_th) / total, 0.0, 1.0);
}

double DensityGrid::at(double m) const {
    if (m <= nodes.front() || m > nodes.back()) {
        if (m == nodes.back()) return values.back();
        return 0.0;
    }
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), m);
    const std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
    const double t = (m - nodes[j]) / (nodes[j + 1] - nodes[j]);
    return values[j] + t * (values[j + 1] - values[j]);
}

DensityGrid build_grid(const SystemParams& params,
                       const ChannelModel& channel, int n_nodes) {
    require_valid(params, channel);
    if (!params.stable())
        throw Error(ErrorCode::UnstableSystem,
                    "density solver requires |rho| < 1 (compact support)");
    if (n_nodes < 64)
        throw Error(ErrorCode::InvalidArgument, "need n_nodes >= 64");

    DensityGrid grid;
    grid.params = params;
    grid.support_max = m_max(params);
    const double su2 = params.sigma_u2;

    // Lower cutoff: the Rayleigh density behaves like exp(-lambda/M) near
    // zero; pick eps so that exp(-lambda/eps) < 1e-30. Custom channels
    // with bounded SNR support cannot push M below su2/(1 + gamma_max*su2).
    double eps;
    if (channel.is_rayleigh()) {
        eps = 0.999 * channel.lambda() / (30.0 * std::log(10.0));
    } else {
        eps = 1e-6 * su2;
    }
    eps = std::min(eps, 0.5 * su2);
    grid.eps = eps;

    const bool has_tail = grid.support_max > su2 * (1.0 + 1e-12);
    int n_log = has_tail ? n_nodes / 2 : n_nodes;
    int n_lin = n_nodes - n_log;  // node count above the break, excl. break
    if (has_tail && n_lin % 2 != 0) {
        --n_lin;
        ++n_log;
    }

    grid.nodes.reserve(static_cast<std::size_t>(n_nodes));
    const double lr = std::log(su2 / eps);
    for (int i = 0; i < n_log; ++i) {
        const double t = static_cast<double>(i) / (n_log - 1);
        grid.nodes.push_back(eps * std::exp(lr * t));
    }
    grid.nodes[static_cast<std::size_t>(n_log) - 1] = su2;  // exact break node
    grid.break_index = static_cast<std::size_t>(n_log) - 1;
    if (has_tail) {
        const double h = (grid.support_max - su2) / n_lin;
        for (int i = 1; i <= n_lin; ++i)
            grid.nodes.push_back(su2 + h * i);
        grid.nodes.back() = grid.support_max;
    }

    // Weights: non-uniform trapezoid on the log branch, composite Simpson
    // on the (uniform, even-interval) linear branch.
    grid.weights.assign(grid.nodes.size(), 0.0);
    for (std::size_t i = 0; i < grid.break_index; ++i) {
        const double h = grid.nodes[i + 1] - grid.nodes[i];
        grid.weights[i] += 0.5 * h;
        grid.weights[i + 1] += 0.5 * h;
    }
    if (has_tail) {
        const double h = (grid.support_max - su2) / n_lin;
        for (std::size_t i = grid.break_index; i < grid.nodes.size();
             ++i) {
            const std::size_t k = i - grid.break_index;
            double w;
            if (k == 0 || k == static_cast<std::size_t>(n_lin))
                w = h / 3.0;
            else if (k % 2 == 1)
                w = 4.0 * h / 3.0;
            else
                w = 2.0 * h / 3.0;
            grid.weights[i] += w;
        }
    }

    grid.values.assign(grid.nodes.size(),
                       1.0 / (grid.support_max - eps));  // uniform start
    return grid;
}

void apply_transfer_operator(DensityGrid& grid, const ChannelModel& channel,
                             double* mass_defect) {
    const auto& p = grid.params;
    const double su2 = p.sigma_u2;
    const double rho2 = p.rho * p.rho;
    const std::size_t n = grid.size();
    std::vector<double> out(n);

    if (channel.is_rayleigh()) {
        // Rayleigh kernel factorizes: f_new(M) = (lambda/M^2) e^{-lambda/M}
        // * int_{cut(M)} exp(lambda/(rho^2 m + su2)) f(m) dm, with
        // cut(M) = 0 below the break and (M - su2)/rho^2 above it.
        const double lambda = channel.lambda();
        std::vector<double> g(n);
        for (std::size_t j = 0; j < n; ++j)
            g[j] = std::exp(lambda / (rho2 * grid.nodes[j] + su2)) *
                   grid.values[j];
        // Both branches integrate g with the same suffix-trapezoid rule so
        // that the cut at (M - su2)/rho^2 joins the full integral
        // continuously; mixing quadrature rules here would make the two
        // branches inconsistent for rough densities.
        SuffixIntegral suffix(grid.nodes, g);

        for (std::size_t i = 0; i < n; ++i) {
            const double m = grid.nodes[i];
            const double shape =
                lambda / (m * m) * std::exp(-lambda / m);
            if (i <= grid.break_index) {
                out[i] = shape * suffix.total();
            } else {
                const double cut = (m - su2) / rho2;
                out[i] = shape * suffix.from(cut);
            }
        }
    } else {
        // Generic kernel: f_new(M) = (1/M^2) int f_gamma(1/M - 1/(rho^2 m
        // + su2)) f(m) dm over the same cut.
        for (std::size_t i = 0; i < n; ++i) {
            const double m_out = grid.nodes[i];
            std::vector<double> g(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double arg =
                    1.0 / m_out - 1.0 / (rho2 * grid.nodes[j] + su2);
                g[j] = (arg >= 0.0 ? channel.pdf(arg) : 0.0) *
                       grid.values[j];
            }
            SuffixIntegral suffix(grid.nodes, g);
            const double cut =
                m_out <= su2 ? 0.0 : (m_out - su2) / (rho2 > 0.0 ? rho2 : 1.0);
            out[i] = suffix.from(cut) / (m_out * m_out);
        }
    }

    grid.values = std::move(out);
    const double mass = grid.mass();
    if (mass_defect) *mass_defect = std::abs(mass - 1.0);
    if (mass > 0.0)
        for (auto& v : grid.values) v /= mass;
}

std::pair<DensityGrid, SolveReport> solve_stationary(
    const SystemParams& params, const ChannelModel& channel, double tol,
    int max_iter, int n_nodes) {
    if (!(tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    DensityGrid grid = build_grid(params, channel, n_nodes);
    SolveReport report;

    // normalize the uniform start
    {
        const double mass = grid.mass();
        for (auto& v : grid.values) v /= mass;
    }

    std::vector<double> prev(grid.size());
    for (int it = 1; it <= max_iter; ++it) {
        prev = grid.values;
        double defect = 0.0;
        apply_transfer_operator(grid, channel, &defect);
        report.mass_defect = defect;
        double res = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j)
            res += grid.weights[j] * std::abs(grid.values[j] - prev[j]);
        report.iterations = it;
        report.final_residual = res;
        if (res < tol) {
            report.converged = true;
            break;
        }
    }
    if (channel.is_rayleigh())
        report.kappa = kappa_from_density(grid, params, channel.lambda());
    else
        report.kappa = std::numeric_limits<double>::quiet_NaN();
    return {std::move(grid), report};
}

double kappa_from_density(const DensityGrid& grid, const SystemParams& params,
                          double lambda) {
    const double rho2 = params.rho * params.rho;
    double k = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        k += grid.weights[j] *
             std::exp(lambda / (rho2 * grid.nodes[j] + params.sigma_u2)) *
             grid.values[j];
    return k;
}

}  // namespace iev

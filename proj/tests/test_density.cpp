#include <doctest.h>

#include "density.hpp"
#include "model.hpp"
#include "montecarlo.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace iev;

namespace {
const SystemParams kFig1{0.95, 1.0, 1.0};
const SystemParams kRho0{0.0, 1.0, 1.0};

double rayleigh_shape(double m, double lambda) {
    return lambda / (m * m) * std::exp(-lambda / m);
}
}

TEST_CASE("build_grid: support, break node, boundary cutoff") {
    const auto chan = ChannelModel::rayleigh(0.25);
    const auto g = build_grid(kFig1, chan, 512);
    CHECK(g.support_max == doctest::Approx(10.2564).epsilon(1e-4));
    CHECK(g.nodes.back() == g.support_max);
    CHECK(g.nodes[g.break_index] == 1.0);  // exactly sigma_u2
    CHECK(g.eps == doctest::Approx(0.0036).epsilon(0.05));
    CHECK(std::exp(-0.25 / g.eps) < 1e-30);
    for (std::size_t i = 1; i < g.nodes.size(); ++i)
        CHECK(g.nodes[i] > g.nodes[i - 1]);
}

TEST_CASE("build_grid: rho = 0 collapses the support to (0, sigma_u2]") {
    const auto g = build_grid(kRho0, ChannelModel::rayleigh(1.0), 256);
    CHECK(g.support_max == 1.0);
    CHECK(g.break_index == g.size() - 1);
}

TEST_CASE("build_grid rejects unstable systems and tiny grids") {
    const auto chan = ChannelModel::rayleigh(1.0);
    CHECK_THROWS_AS(build_grid({1.0, 1.0, 1.0}, chan, 256), const Error&);
    CHECK_THROWS_AS(build_grid(kFig1, chan, 32), const Error&);
}

TEST_CASE("one operator application at rho = 0 yields the exact density") {
    const double lambda = 1.0;
    auto grid = build_grid(kRho0, ChannelModel::rayleigh(lambda), 512);
    // arbitrary (normalized) starting density
    {
        const double mass = grid.mass();
        for (auto& v : grid.values) v /= mass;
    }
    apply_transfer_operator(grid, ChannelModel::rayleigh(lambda));
    const double norm = std::exp(lambda / 1.0);  // e^{lambda/sigma_u2}
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = rayleigh_shape(grid.nodes[i], lambda) * norm;
        if (expected > 1e-12)
            CHECK(grid.values[i] ==
                  doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("operator preserves normalization to 1e-9") {
    const auto chan = ChannelModel::rayleigh(0.25);
    auto grid = build_grid(kFig1, chan, 512);
    for (int it = 0; it < 20; ++it) {
        apply_transfer_operator(grid, chan);
        CHECK(grid.mass() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("stationary density is a fixed point of the operator") {
    const auto chan = ChannelModel::rayleigh(0.25);
    auto [grid, report] = solve_stationary(kFig1, chan, 1e-10, 10000, 512);
    REQUIRE(report.converged);
    const auto before = grid.values;
    apply_transfer_operator(grid, chan);
    double l1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        l1 += grid.weights[i] * std::abs(grid.values[i] - before[i]);
    CHECK(l1 < 1e-9);
}

TEST_CASE("point-mass pushforward matches a Monte Carlo oracle") {
    const double lambda = 0.5;
    const double m0 = 2.0;
    const auto chan = ChannelModel::rayleigh(lambda);
    auto grid = build_grid(kFig1, chan, 1024);

    // near-delta input at m0 (one-node spike, then normalized)
    std::size_t j0 = 0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (std::abs(grid.nodes[j] - m0) < std::abs(grid.nodes[j0] - m0))
            j0 = j;
    std::fill(grid.values.begin(), grid.values.end(), 0.0);
    grid.values[j0] = 1.0 / grid.weights[j0];
    apply_transfer_operator(grid, chan);

    // brute-force pushforward of the kernel
    Rng rng(99);
    std::vector<double> draws(1000000);
    for (auto& d : draws)
        d = variance_step(grid.nodes[j0], chan.sample(rng), kFig1);
    const double ks = ks_vs_cdf(std::move(draws), [&](double m) {
        return grid.cdf(m);
    });
    CHECK(ks < 0.02);
}

TEST_CASE("solve_stationary at rho = 0 collapses in two iterations") {
    const double lambda = 1.0;
    auto [grid, report] =
        solve_stationary(kRho0, ChannelModel::rayleigh(lambda), 1e-10,
                         10000, 512);
    CHECK(report.converged);
    CHECK(report.iterations <= 3);
    CHECK(report.kappa == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    const double norm = std::exp(lambda);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = rayleigh_shape(grid.nodes[i], lambda) * norm;
        if (expected > 1e-9)
            CHECK(grid.values[i] ==
                  doctest::Approx(expected).epsilon(1e-4));
    }
}

TEST_CASE("first branch has the exact closed-form shape; extremum at "
          "lambda/2; kink at the break") {
    const double lambda = 0.25;
    const auto chan = ChannelModel::rayleigh(lambda);
    auto [grid, report] = solve_stationary(kFig1, chan, 1e-10, 10000, 512);
    REQUIRE(report.converged);

    // ratio to the analytic shape is constant (= kappa) below the break
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i <= grid.break_index; ++i) {
        const double shape = rayleigh_shape(grid.nodes[i], lambda);
        if (shape < 1e-12) continue;
        const double r = grid.values[i] / shape;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK((hi - lo) / lo < 0.01);
    CHECK(0.5 * (hi + lo) == doctest::Approx(report.kappa).epsilon(1e-3));

    // extremum of the first branch at lambda/2, within one grid cell
    std::size_t best = 0;
    for (std::size_t i = 0; i <= grid.break_index; ++i)
        if (grid.values[i] > grid.values[best]) best = i;
    REQUIRE(best > 0);
    CHECK(grid.nodes[best - 1] <= lambda / 2.0);
    CHECK(grid.nodes[best + 1] >= lambda / 2.0);

    // the tail decays beyond the break region
    for (std::size_t i = grid.break_index; i + 1 < grid.size(); ++i)
        if (grid.nodes[i] > 1.5)
            CHECK(grid.values[i + 1] <= grid.values[i] * (1.0 + 1e-9));
}

TEST_CASE("grid refinement self-consistency of outage and kappa") {
    const auto chan = ChannelModel::rayleigh(0.25);
    auto [g1, r1] = solve_stationary(kFig1, chan, 1e-10, 10000, 512);
    auto [g2, r2] = solve_stationary(kFig1, chan, 1e-10, 10000, 1024);
    REQUIRE(r1.converged);
    REQUIRE(r2.converged);
    CHECK(std::abs(r1.kappa - r2.kappa) < 1e-4);
    for (double th : {0.1, 0.5, 1.0, 2.0})
        CHECK(std::abs(g1.outage(th) - g2.outage(th)) < 1e-4);
}

TEST_CASE("outage limits and rho = 0 closed form") {
    auto [grid, report] =
        solve_stationary(kRho0, ChannelModel::rayleigh(1.0), 1e-10, 10000,
                         2048);
    REQUIRE(report.converged);
    CHECK(grid.outage(grid.support_max) == doctest::Approx(0.0));
    CHECK(grid.outage(1e-9) == 1.0);
    CHECK(grid.outage(0.5) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("outage agrees with 1 - kappa exp(-lambda/M_th) below the break") {
    const double lambda = 0.25;
    const auto chan = ChannelModel::rayleigh(lambda);
    auto [grid, report] = solve_stationary(kFig1, chan, 1e-10, 10000, 1024);
    REQUIRE(report.converged);
    for (double th : {0.1, 0.3, 0.5, 0.9, 1.0}) {
        const double closed =
            1.0 - report.kappa * std::exp(-lambda / th);
        CHECK(grid.outage(th) == doctest::Approx(closed).epsilon(2e-3));
    }
}

TEST_CASE("kappa approaches 1 as lambda vanishes") {
    auto [grid, report] =
        solve_stationary(kFig1, ChannelModel::rayleigh(1e-4), 1e-12, 10000,
                         512);
    REQUIRE(report.converged);
    CHECK(report.kappa == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("custom channel solver agrees with the Rayleigh fast path") {
    const double lambda = 0.5;
    const auto rayleigh = ChannelModel::rayleigh(lambda);
    const auto custom = ChannelModel::custom(
        [lambda](double g) { return lambda * std::exp(-lambda * g); },
        60.0 / lambda, 8192);
    auto [ga, ra] = solve_stationary(kFig1, rayleigh, 1e-9, 10000, 256);
    auto [gb, rb] = solve_stationary(kFig1, custom, 1e-9, 10000, 256);
    REQUIRE(ra.converged);
    REQUIRE(rb.converged);
    for (double th : {0.2, 0.5, 1.0, 2.0})
        CHECK(ga.outage(th) == doctest::Approx(gb.outage(th)).epsilon(0.02));
}

TEST_CASE("solver starting from the analytic rho = 0 shape reaches the "
          "same fixed point") {
    const auto chan = ChannelModel::rayleigh(0.25);
    auto [ref, rep] = solve_stationary(kFig1, chan, 1e-10, 10000, 512);
    REQUIRE(rep.converged);

    auto grid = build_grid(kFig1, chan, 512);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid.values[i] = rayleigh_shape(std::min(grid.nodes[i], 1.0), 0.25);
    double mass = grid.mass();
    for (auto& v : grid.values) v /= mass;
    for (int it = 0; it < 10000; ++it) {
        const auto prev = grid.values;
        apply_transfer_operator(grid, chan);
        double res = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            res += grid.weights[i] * std::abs(grid.values[i] - prev[i]);
        if (res < 1e-10) break;
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (ref.values[i] > 1e-9)
            CHECK(grid.values[i] ==
                  doctest::Approx(ref.values[i]).epsilon(1e-6));
}

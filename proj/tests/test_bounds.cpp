#include <doctest.h>

#include "bounds.hpp"
#include "density.hpp"
#include "model.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace iev;

namespace {
const SystemParams kFig1{0.95, 1.0, 1.0};
const SystemParams kRho0{0.0, 1.0, 1.0};
}

TEST_CASE("a_kappa vanishes exactly at rho = 0") {
    CHECK(a_kappa(kRho0, 0.4) == 0.0);
    CHECK(std::abs(oracles::a_kappa_gk(kRho0, 0.4)) < 1e-10);
}

TEST_CASE("a_kappa tends to 0 as lambda tends to 0 (limit, not the "
          "pointwise value)") {
    double prev = a_kappa(kFig1, 0.1);
    for (double lambda : {0.03, 0.01, 0.003, 0.001}) {
        const double a = a_kappa(kFig1, lambda);
        CHECK(a > 0.0);
        CHECK(a < prev);
        prev = a;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("a_kappa matches the independent quadrature oracle to 1e-8") {
    for (double lambda : {0.001, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0}) {
        CHECK(a_kappa(kFig1, lambda) ==
              doctest::Approx(oracles::a_kappa_gk(kFig1, lambda))
                  .epsilon(1e-8));
    }
}

TEST_CASE("a_kappa rejects lambda <= 0") {
    CHECK_THROWS_AS(a_kappa(kFig1, 0.0), const Error&);
    CHECK_THROWS_AS(a_kappa(kFig1, -1.0), const Error&);
}

TEST_CASE("kappa bounds: ordering, variants, small-lambda tightness") {
    const auto b = kappa_bounds(kFig1, 0.01);
    CHECK(b.variant == KappaVariant::StableB);
    CHECK(b.kappa_l > 0.0);
    CHECK(b.kappa_l <= b.kappa_u);
    CHECK(b.kappa_u - b.kappa_l < 1e-3);

    const auto u = kappa_bounds({1.1, 1.0, 1.0}, 0.25);
    CHECK(u.variant == KappaVariant::UnstableInf);
    CHECK(u.kappa_l <= u.kappa_u);
}

TEST_CASE("rho = 0 collapses both kappa bounds to exp(lambda/sigma_u2)") {
    for (double lambda : {0.1, 0.5, 1.0}) {
        const auto b = kappa_bounds(kRho0, lambda);
        CHECK(b.a_kappa == 0.0);
        CHECK(b.kappa_l == doctest::Approx(std::exp(lambda)).epsilon(1e-12));
        CHECK(b.kappa_u == doctest::Approx(std::exp(lambda)).epsilon(1e-12));
    }
}

TEST_CASE("solver kappa lies strictly between the bounds") {
    for (double lambda : {1.0, 0.25}) {
        const auto b = kappa_bounds(kFig1, lambda);
        auto [grid, report] = solve_stationary(
            kFig1, ChannelModel::rayleigh(lambda), 1e-10, 10000, 512);
        REQUIRE(report.converged);
        CHECK(report.kappa > b.kappa_l);
        CHECK(report.kappa < b.kappa_u);
    }
}

TEST_CASE("bound gap shrinks monotonically with lambda") {
    double prev_gap = 1e300;
    for (double lambda : {1.0, 0.5, 0.25, 0.1, 0.01, 0.001}) {
        const auto b = kappa_bounds(kFig1, lambda);
        const double gap = b.kappa_u - b.kappa_l;
        CHECK(gap < prev_gap);
        prev_gap = gap;
        if (lambda <= 0.001) CHECK(b.kappa_u == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("closed-form outage") {
    // tiny lambda with kappa = 1: essentially no outage
    CHECK(outage_closed_form(1.0, 1e-12, 0.5, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // rho = 0 exact kappa
    CHECK(outage_closed_form(std::exp(1.0), 1.0, 0.5, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    // threshold at the break point, high SNR: outage ~ 0
    CHECK(outage_closed_form(kappa_bounds(kFig1, 1e-3).kappa_u, 1e-3, 1.0,
                             1.0) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK_THROWS_AS(outage_closed_form(1.0, 0.25, 1.5, 1.0), const Error&);
}

TEST_CASE("outage bounds: ordering, collapse at rho = 0, clamping") {
    const auto r = outage_bounds(kFig1, 0.125, 0.5);
    CHECK(r.lower <= r.upper);
    CHECK(r.lower >= 0.0);
    CHECK(r.upper <= 1.0);

    const auto z = outage_bounds(kRho0, 1.0, 0.5);
    CHECK(z.lower == doctest::Approx(z.upper).epsilon(1e-12));
    CHECK(z.lower ==
          doctest::Approx(oracles::rho0_outage(0.5, 1.0, 1.0)).epsilon(1e-10));

    // very low SNR can push the raw formulas outside [0, 1]
    for (double lambda : {2.0, 5.0, 10.0, 20.0}) {
        const auto b = outage_bounds(kFig1, lambda, 0.9);
        CHECK(b.lower >= 0.0);
        CHECK(b.upper <= 1.0);
        CHECK(b.lower <= b.upper);
    }
}

TEST_CASE("outage bounds vanish together as lambda tends to 0") {
    const auto b = outage_bounds(kFig1, 1e-5, 0.5);
    CHECK(b.upper < 1e-4);
    CHECK(b.upper - b.lower < 1e-6);
}

TEST_CASE("high-SNR linear law") {
    CHECK(high_snr_outage(kFig1, 0.3, 1.0) == 0.0);  // slope vanishes
    CHECK(high_snr_outage(kFig1, 0.01, 0.5) == doctest::Approx(0.01));
    CHECK_THROWS_AS(high_snr_outage(kFig1, 0.01, 1.5), const Error&);
}

TEST_CASE("kappa_taylor partial sums") {
    CHECK(kappa_taylor(0.7, 1.0, 0) == 1.0);
    CHECK(kappa_taylor(0.25, 1.0, 1) == doctest::Approx(1.25));
    CHECK(kappa_taylor(0.25, 2.0, 1) - 1.0 == doctest::Approx(0.125));
    CHECK(kappa_taylor(0.8, 1.3, 30) ==
          doctest::Approx(std::exp(0.8 / 1.3)).epsilon(1e-14));
    CHECK_THROWS_AS(kappa_taylor(0.25, 1.0, -1), const Error&);
}

TEST_CASE("order-1 Taylor residual of solver kappa is second order") {
    // residual behaves like lambda^2 log(1/lambda): the normalized ratio
    // stays bounded and roughly constant as lambda shrinks
    double prev_ratio = 0.0;
    for (double lambda : {0.2, 0.1, 0.05}) {
        auto [grid, report] = solve_stationary(
            kFig1, ChannelModel::rayleigh(lambda), 1e-12, 10000, 512);
        REQUIRE(report.converged);
        const double resid =
            std::abs(report.kappa - kappa_taylor(lambda, 1.0, 1));
        const double ratio =
            resid / (lambda * lambda * std::log(1.0 / lambda));
        CHECK(ratio < 2.0);
        if (prev_ratio > 0.0)
            CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.3));
        prev_ratio = ratio;
    }
}

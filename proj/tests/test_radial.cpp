#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "shartree/hartree.hpp"
#include "shartree/rng.hpp"

using namespace sh;

TEST_CASE("oracle values are frozen")
{
    auto ga = [](double r) { return std::exp(-r * r); };
    CHECK(oracle::convolution_3d(ga, ga, 1.0) == doctest::Approx(1.19407766382588).epsilon(1e-11));
    CHECK(oracle::green_norm_sq(1.0) == doctest::Approx(1 / (8 * pi)).epsilon(1e-15));
    auto w1 = [](double r) { return 1.2 * std::exp(-0.8 * r * r) * (1 + 0.3 * r * r); };
    auto g1 = [](double r) { return 0.7 * std::exp(-1.3 * r * r) * (1 - 0.2 * r * r); };
    CHECK(oracle::convolution_3d(w1, g1, 0.5) == doctest::Approx(1.41151386208).epsilon(1e-10));
    CHECK(oracle::convolution_3d(w1, g1, 3.0) == doctest::Approx(0.025683343754).epsilon(1e-9));
}

TEST_CASE("grid validation")
{
    CHECK_THROWS_AS(RadialGrid(0.0, 100), RangeError);
    CHECK_THROWS_AS(RadialGrid(10.0, 8), RangeError);
    CHECK_THROWS_AS(RadialGrid(10.0, 101), RangeError);
    RadialGrid g(10.0, 100);
    CHECK(g.size() == 101);
    CHECK(g.r(100) == doctest::Approx(10.0));
}

TEST_CASE("L^p norms")
{
    RadialGrid g(40.0, 4000);
    auto G = green_field(g, 1.0);
    CHECK(std::pow(lp_norm(G, 2), 2) == doctest::Approx(oracle::green_norm_sq(1.0)).epsilon(1e-6));
    // G_lambda is not in L^p for p >= 3
    CHECK_THROWS_AS(lp_norm(G, 3.0), DivergenceError);
    CHECK_THROWS_AS(lp_norm(G, infinity), DivergenceError);

    auto gauss = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    CHECK(std::pow(lp_norm(gauss, 2), 2) == doctest::Approx(oracle::gaussian_mass(1, 1)).epsilon(1e-9));
    CHECK(lp_norm(gauss, infinity) == doctest::Approx(1.0).epsilon(1e-6));
    // ||exp(-r^2/2)||_4^4 = (pi/2)^{3/2}
    CHECK(std::pow(lp_norm(gauss, 4), 4) == doctest::Approx(std::pow(pi / 2, 1.5)).epsilon(1e-8));
    // singular but L^{5/2}: int_0^inf 4 pi r^2 (e^{-r}/(4 pi r))^{5/2} dr = (4pi)^{-3/2} (2/5)^{1/2} Gamma(1/2)
    double expect = std::pow(4 * pi, -1.5) * std::sqrt(0.4) * std::sqrt(pi);
    CHECK(std::pow(lp_norm(G, 2.5), 2.5) == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("weak Lorentz norm of 1/r")
{
    // |{1/r > t}| = 4 pi / (3 t^3), so ||1/r||_{3,inf} = (4 pi / 3)^{1/3}
    RadialGrid g(5.0, 2000);
    auto w = sample_plain(g, [](double r) { return r > 0 ? 1 / r : 0.0; });
    w[0] = w[1];
    Potential p(w, 1.0);
    CHECK(lorentz_weak_norm(p, 3.0) == doctest::Approx(std::cbrt(4 * pi / 3)).epsilon(1e-2));
}

TEST_CASE("radial convolution against 3D brute force")
{
    RadialGrid g(14.0, 700);
    SplitMix64 rng(11);
    for (int p = 0; p < 3; ++p) {
        double a1 = rng.uniform(0.5, 1.5), b1 = rng.uniform(0.5, 2.0), c1 = rng.uniform(-0.5, 0.5);
        double a2 = rng.uniform(0.5, 1.5), b2 = rng.uniform(0.5, 2.0), c2 = rng.uniform(-0.5, 0.5);
        auto w = [=](double r) { return a1 * std::exp(-b1 * r * r) * (1 + c1 * r * r); };
        auto f = [=](double r) { return a2 * std::exp(-b2 * r * r) * (1 + c2 * r * r); };
        auto conv = radial_convolve(sample_plain(g, w), sample_plain(g, f));
        for (int j : {0, 25, 75, 150}) {
            double ref = oracle::convolution_3d(w, f, g.r(j));
            CHECK(std::abs(conv[j] - ref) <= 1e-4 * oracle::convolution_3d(w, f, 0.0));
        }
    }
}

TEST_CASE("Gaussian self-convolution")
{
    RadialGrid g(14.0, 700);
    auto ga = sample_plain(g, [](double r) { return std::exp(-r * r); });
    auto c = radial_convolve(ga, ga);
    double amp = std::pow(pi / 2, 1.5);
    for (int j = 0; j <= 350; j += 7) CHECK(std::abs(c[j] - amp * std::exp(-g.r(j) * g.r(j) / 2)) < 1e-6 * amp);
}

TEST_CASE("convolution with zero and truncation warning")
{
    RadialGrid g(10.0, 200);
    auto z = PlainRadialField(g);
    auto ga = sample_plain(g, [](double r) { return std::exp(-r * r); });
    auto c = radial_convolve(z, ga);
    CHECK(max_abs(c.values) == 0.0);
    Diagnostics d;
    auto wide = sample_plain(g, [](double) { return 1.0; });
    radial_convolve(wide, ga, &d);
    CHECK(!d.warnings.empty());
}

TEST_CASE("density convolver agrees with radial_convolve")
{
    RadialGrid g(12.0, 300);
    auto w = sample_plain(g, [](double r) { return std::exp(-r * r); });
    auto u = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2) * cplx(1, 0.5); });
    DensityConvolver conv(w);
    auto V = conv.apply(reduced_density(u));
    auto dens = sample_plain(g, [](double r) { return 1.25 * std::exp(-r * r); });
    auto ref = radial_convolve(w, dens);
    for (int j = 0; j <= g.n; j += 10) CHECK(V[j] == doctest::Approx(ref[j].real()).epsilon(1e-8));
}

TEST_CASE("decompose and recompose")
{
    RadialGrid g(20.0, 400);
    auto psi = sample_reduced(g, [](double r) { return std::exp(-r) * (0.3 + r) + r * std::exp(-r * r); });
    for (double lam : {1.0, 4.0}) {
        auto st = decompose(psi, lam);
        CHECK(st.phi[0] == cplx(0));
        CHECK(std::abs(st.kappa - 4 * pi * 0.3) < 1e-14);
        auto back = recompose(st);
        CHECK(max_abs((back - psi).values) < 1e-14);
    }
    CHECK_THROWS_AS(decompose(psi, 0.0), DomainError);
}

TEST_CASE("domain elements satisfy the boundary condition")
{
    RadialGrid g(20.0, 2000);
    auto phi = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    for (double a : {0.0, 0.5, 2.0}) {
        PointInteraction op(a);
        auto psi = domain_element(phi, op);
        CHECK(in_operator_domain(psi, 1.0, op).residual < 1e-6);
        CHECK(in_operator_domain(psi, 3.0, op).residual < 1e-6);
    }
    // regular functions are in the Friedrichs domain only if psi(0) is finite
    auto G = green_field(g, 1.0);
    CHECK(in_operator_domain(G, 1.0, PointInteraction::friedrichs()).residual > 0.5);
}

TEST_CASE("spatial tail mass")
{
    RadialGrid g(10.0, 200);
    auto in = sample_reduced(g, [](double r) { return r < 5 ? r : 0.0; });
    CHECK(spatial_tail_mass(in) == 0.0);
    auto out = sample_reduced(g, [](double r) { return r > 9.5 ? 1.0 : 0.0; });
    CHECK(spatial_tail_mass(out) == doctest::Approx(1.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "shartree/propagator.hpp"
#include "shartree/solver.hpp"

using namespace sh;

TEST_CASE("oracle: free Gaussian value is frozen")
{
    auto z = oracle::free_gaussian(1.0, 0.7, 1.3);
    CHECK(z.real() == doctest::Approx(0.172572964977854).epsilon(1e-13));
    CHECK(z.imag() == doctest::Approx(-0.284890428657798).epsilon(1e-13));
    CHECK(std::abs(oracle::free_gaussian(0.8, 0.0, 0.4) - std::exp(-0.125)) < 1e-15);
}

TEST_CASE("admissible pairs")
{
    auto p = admissible_pair(2.0);
    CHECK(std::isinf(p.q));
    auto q = admissible_pair(2.5);
    CHECK(2 / q.q == doctest::Approx(3 * (0.5 - 1 / 2.5)));
    CHECK_THROWS_AS(admissible_pair(3.0), RangeError);
    CHECK_THROWS_AS(admissible_pair(1.9), RangeError);
    CHECK(decay_target(18.0 / 7) == doctest::Approx(-1.0 / 3));
    CHECK(decay_target(2.5) == doctest::Approx(-0.3));
}

TEST_CASE("linear evolution is unitary and matches the free Gaussian")
{
    RadialGrid g(60.0, 1200);
    auto T = build_transform(g, PointInteraction::friedrichs());
    auto f = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    CHECK(max_abs((evolve_linear(f, *T, 0.0) - f).values) == 0.0);
    for (double t : {0.3, 1.0, 2.0}) {
        auto u = evolve_linear(f, *T, t);
        CHECK(lp_norm(u, 2) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-12));
        double err = 0;
        for (int j = 0; j <= g.n / 2; ++j) err = std::max(err, std::abs(u[j] - g.r(j) * oracle::free_gaussian(1.0, t, g.r(j))));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("linear evolution with a point interaction is unitary and reversible")
{
    RadialGrid g(30.0, 600);
    auto T = build_transform(g, PointInteraction(0.4));
    auto f = sample_reduced(g, [](double r) { return (0.2 + r) * std::exp(-r * r / 2); });
    auto u = evolve_linear(f, *T, 1.3);
    CHECK(lp_norm(u, 2) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-12));
    auto back = evolve_linear(u, *T, -1.3);
    CHECK(max_abs((back - f).values) < 1e-12);
    // conjugation symmetry: conj(e^{-itH} f) = e^{itH} conj f
    auto a = conj(evolve_linear(f, *T, 0.8));
    auto b = evolve_linear(conj(f), *T, -0.8);
    CHECK(max_abs((a - b).values) < 1e-12);
}

TEST_CASE("dispersive decay slopes")
{
    RadialGrid g(120.0, 1200);
    const double s = 0.5;
    auto f = sample_reduced(g, [&](double r) { return r * std::exp(-r * r / (2 * s * s)); });
    auto times = log_spaced(6 * s * s, 24 * s * s, 10);
    auto T = build_transform(g, PointInteraction::friedrichs());
    auto rep = dispersive_decay_experiment(f, *T, 2.5, times);
    CHECK(rep.pass);
    CHECK(rep.slope == doctest::Approx(-0.3).epsilon(0.05));
    auto mass = dispersive_decay_experiment(f, *T, 2.0, times);
    CHECK(std::abs(mass.slope) < 1e-8);
    CHECK(mass.pass);
    CHECK_THROWS_AS(dispersive_decay_experiment(f, *T, 2.5, log_spaced(1, 2, 5)), RangeError);
    // a sweep that runs into the boundary is refused
    CHECK_THROWS_AS(dispersive_decay_experiment(f, *T, 2.5, log_spaced(10, 100, 10)), WindowError);
}

TEST_CASE("Strichartz norms")
{
    RadialGrid g(20.0, 400);
    auto f = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    std::vector<double> times{0.0, 0.5, 1.0};
    std::vector<ReducedField> same(3, f);
    CHECK(strichartz_norm(times, same, 2.0, 2.5) == doctest::Approx(lp_norm(f, 2.5)));
    auto T = build_transform(g, PointInteraction(1.0));
    std::vector<ReducedField> flow;
    for (double t : times) flow.push_back(evolve_linear(f, *T, t));
    CHECK(strichartz_norm(times, flow, infinity, 2.0) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-12));
}

TEST_CASE("log spaced times")
{
    auto t = log_spaced(1.0, 100.0, 3);
    CHECK(t[0] == doctest::Approx(1.0));
    CHECK(t[1] == doctest::Approx(10.0));
    CHECK(t[2] == doctest::Approx(100.0));
}

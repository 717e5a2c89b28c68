#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "shartree/spectral.hpp"
#include "shartree/rng.hpp"

using namespace sh;

namespace {

ReducedField random_smooth(const RadialGrid& g, SplitMix64& rng, bool regular)
{
    cplx a0(rng.normal(), rng.normal()), a1(rng.normal(), rng.normal()), a2(rng.normal(), rng.normal());
    double b = rng.uniform(0.3, 1.0);
    return sample_reduced(g, [&](double r) { return std::exp(-b * r * r) * ((regular ? 0.0 : a0) + a1 * r + a2 * r * r * r); });
}

} // namespace

TEST_CASE("transform is unitary and complete")
{
    RadialGrid g(20.0, 400);
    SplitMix64 rng(3);
    for (auto op : {PointInteraction(0.0), PointInteraction(0.1), PointInteraction(1.0), PointInteraction::friedrichs(),
                    PointInteraction(-0.3)}) {
        auto T = build_transform(g, op);
        CHECK(T->completeness_defect() < 1e-10);
        for (int e = 0; e < 4; ++e) {
            auto f = random_smooth(g, rng, op.is_friedrichs());
            auto F = forward(f, T);
            double n2 = inner_halfline(f, f).real();
            CHECK(std::abs(parseval_sum(F) - n2) < 1e-10 * n2);
            CHECK(max_abs((inverse(F) - f).values) < 1e-10 * max_abs(f.values));
        }
    }
}

TEST_CASE("alpha = 0 and Friedrichs modes are cosines and sines")
{
    RadialGrid g(20.0, 400);
    auto N = RobinTransform(g, PointInteraction(0.0));
    auto D = RobinTransform(g, PointInteraction::friedrichs());
    auto EN = N.eigen_matrix(), ED = D.eigen_matrix();
    for (int m = 0; m < 20; ++m) {
        double kn = N.k_nodes()[m], kd = D.k_nodes()[m];
        CHECK(kn == doctest::Approx((m + 0.5) * pi / 20));
        CHECK(kd == doctest::Approx((m + 1) * pi / 20));
        for (int j = 0; j < g.n; j += 37) {
            CHECK(std::abs(EN(j, m) - std::sqrt(2 / pi) * std::cos(kn * g.r(j))) < 1e-10);
            CHECK(std::abs(ED(j, m) - std::sqrt(2 / pi) * std::sin(kd * g.r(j))) < 1e-10);
        }
    }
}

TEST_CASE("Robin phase shift")
{
    RadialGrid g(20.0, 400);
    RobinTransform t(g, PointInteraction(1.0));
    double beta = 4 * pi;
    for (double k : {0.1, 1.0, 10.0}) CHECK(t.phase(k) == doctest::Approx(std::atan2(k, beta)));
    // quantization k R + delta = m pi
    for (int m = 0; m < 5; ++m) {
        double k = t.k_nodes()[m];
        double q = (k * 20 + t.phase(k)) / pi;
        CHECK(q == doctest::Approx(std::round(q)).epsilon(1e-12));
    }
}

TEST_CASE("bound state carried as mode 0")
{
    RadialGrid g(40.0, 400);
    RobinTransform t(g, PointInteraction(-1 / (4 * pi)));
    REQUIRE(t.has_bound_state());
    CHECK(t.eigenvalues()[0] == doctest::Approx(-1.0));
    auto E = t.eigen_matrix();
    // column 0 ~ sqrt(2) e^{-r}
    CHECK(std::abs(E(100, 0) - std::sqrt(2.0) * std::exp(-10.0)) < 1e-8);
    CHECK_THROWS_AS(RobinTransform(RadialGrid(1.0, 100), PointInteraction(-1 / (4 * pi))), ResolutionError);
}

TEST_CASE("resolution contract")
{
    RadialGrid g(10.0, 100);
    CHECK_THROWS_AS(RobinTransform(g, PointInteraction(1.0), 100.0), ResolutionError);
    RobinTransform t(g, PointInteraction(1.0), 5.0);
    CHECK(t.k_max() <= 5.0);
    CHECK(t.modes() < 100);
}

TEST_CASE("fractional powers")
{
    RadialGrid g(20.0, 400);
    auto T = build_transform(g, PointInteraction(0.5));
    SplitMix64 rng(8);
    auto f = random_smooth(g, rng, false);
    CHECK(max_abs((fractional_apply(f, *T, 0.0, false) - f).values) < 1e-12 * max_abs(f.values));
    // two half powers make one full power
    auto half = fractional_apply(fractional_apply(f, *T, 1.0, true, 1.0), *T, 1.0, true, 1.0);
    auto full = fractional_apply(f, *T, 2.0, true, 1.0);
    CHECK(max_abs((half - full).values) < 1e-10 * max_abs(full.values));
    CHECK_THROWS_AS(fractional_apply(f, *T, 2.5, true, 1.0), RangeError);
    auto B = build_transform(RadialGrid(40.0, 400), PointInteraction(-1 / (4 * pi)));
    auto fb = sample_reduced(B->grid(), [](double r) { return r * std::exp(-r * r); });
    CHECK_THROWS_AS(fractional_apply(fb, *B, 1.0, false), DomainError);
    CHECK_THROWS_AS(fractional_apply(fb, *B, 1.0, true, 0.5), DomainError);
}

TEST_CASE("perturbed norms")
{
    RadialGrid g(20.0, 400);
    auto T = build_transform(g, PointInteraction(0.5));
    auto f = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    CHECK(perturbed_norm(f, *T, 0.0) == doctest::Approx(std::sqrt(inner_halfline(f, f).real())).epsilon(1e-12));
    CHECK(perturbed_norm(f, *T, 1.0) > perturbed_norm(f, *T, 0.0));
    // H^1 norm squared = mass + form in half-line units
    auto c = T->coefficients(f);
    double h1 = perturbed_norm(f, *T, 1.0);
    CHECK(h1 * h1 == doctest::Approx(inner_halfline(f, f).real() + spectral_form(c, *T) / (4 * pi)).epsilon(1e-12));
    CHECK_THROWS_AS(reject_transition(0.5), RegimeError);
    CHECK_THROWS_AS(reject_transition(1.5), RegimeError);
    CHECK_NOTHROW(reject_transition(1.0));
}

TEST_CASE("Green function: perturbed norm stable, classical norm grows")
{
    for (double s : {0.75, 1.0, 1.25}) {
        std::vector<double> pert, classical;
        for (int n : {200, 400, 800}) {
            RadialGrid g(10.0, n);
            auto G = green_field(g, 1.0);
            pert.push_back(perturbed_norm(G, RobinTransform(g, PointInteraction(1.0)), s));
            classical.push_back(perturbed_norm(G, RobinTransform(g, PointInteraction::friedrichs()), s));
        }
        CHECK(std::abs(pert[2] / pert[1] - 1) < 0.05);
        CHECK(classical[2] / classical[1] > std::pow(2.0, 0.5 * (s - 0.5)));
        CHECK(classical[1] / classical[0] > std::pow(2.0, 0.5 * (s - 0.5)));
    }
}

TEST_CASE("norm equivalence bands")
{
    RadialGrid g(20.0, 400);
    RobinTransform t(g, PointInteraction(1.0));
    RobinTransform fr(g, PointInteraction::friedrichs());
    SplitMix64 rng(21);
    std::vector<DecomposedState> regular, mixed;
    for (int i = 0; i < 6; ++i) {
        regular.push_back(decompose(random_smooth(g, rng, true), 1.0));
        auto phi = random_smooth(g, rng, true);
        mixed.push_back(DecomposedState{phi, cplx(rng.normal(), rng.normal()), 1.0});
    }
    auto low = norm_equivalence_report(regular, t, 0.3, &fr);
    CHECK(low.ratio_min > 0.2);
    CHECK(low.ratio_max < 5.0);
    auto mid = norm_equivalence_report(mixed, t, 1.0, &fr);
    CHECK(mid.ratio_min > 0.0);
    CHECK(std::isfinite(mid.ratio_max));
    CHECK_THROWS_AS(norm_equivalence_report(mixed, t, 0.5, &fr), RegimeError);
}

TEST_CASE("fractional Laplacian of G_lambda")
{
    std::vector<double> c;
    for (int n : {400, 800}) {
        RadialGrid g(20.0, n);
        RobinTransform fr(g, PointInteraction::friedrichs());
        c.push_back(fractional_green_check(fr, 1.0, 1.0, 5.0).c_fit);
    }
    CHECK(std::isfinite(c[1]));
    CHECK(std::abs(c[1] / c[0] - 1) < 0.05);
}

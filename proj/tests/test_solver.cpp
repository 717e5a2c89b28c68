#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "shartree/solver.hpp"

using namespace sh;

namespace {

struct Setup {
    RadialGrid g{30.0, 300};
    PointInteraction op{0.5};
    TransformPtr T = build_transform(g, op);
    ReducedField f = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    Potential w{sample_plain(g, [](double r) { return 2 * std::exp(-r * r); })};
    Potential zero{PlainRadialField(g)};
};

double sup_distance(const Trajectory& a, const Trajectory& b)
{
    double d = 0;
    for (std::size_t i = 0; i < std::min(a.states.size(), b.states.size()); ++i) d = std::max(d, l2_distance(a.states[i], b.states[i]));
    return d;
}

} // namespace

TEST_CASE("Strang step edge cases")
{
    Setup s;
    CHECK(max_abs((strang_step(s.f, s.w, *s.T, 0.0) - s.f).values) == 0.0);
    auto lin = evolve_linear(s.f, *s.T, 0.01);
    CHECK(max_abs((strang_step(s.f, s.zero, *s.T, 0.01) - lin).values) < 1e-14);
}

TEST_CASE("w = 0 reproduces the linear flow")
{
    Setup s;
    SolverConfig c;
    c.dt = 0.01;
    c.t_end = 1.0;
    auto tr = evolve(s.f, s.zero, s.T, c);
    CHECK(tr.termination == Termination::completed);
    CHECK(tr.times.front() == 0.0);
    CHECK(max_abs((tr.states.front() - s.f).values) == 0.0);
    for (std::size_t i = 0; i < tr.states.size(); i += 20)
        CHECK(l2_distance(tr.states[i], evolve_linear(s.f, *s.T, tr.times[i])) < 1e-12);
    for (auto& m : tr.monitors) {
        CHECK(std::abs(m.mass / tr.monitors[0].mass - 1) < 1e-8);
        CHECK(m.h_s_norm == doctest::Approx(tr.monitors[0].h_s_norm).epsilon(1e-12));
    }
}

TEST_CASE("mass conservation and second-order energy drift")
{
    Setup s;
    std::vector<double> drift;
    for (double dt : {8e-3, 4e-3, 2e-3}) {
        SolverConfig c;
        c.dt = dt;
        c.t_end = 1.0;
        auto tr = evolve(s.f, s.w, s.T, c);
        double ed = 0;
        for (auto& m : tr.monitors) {
            CHECK(std::abs(m.mass / tr.monitors[0].mass - 1) < 1e-8);
            ed = std::max(ed, std::abs(m.energy - tr.monitors[0].energy));
        }
        drift.push_back(ed);
    }
    CHECK(std::log2(drift[0] / drift[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(drift[1] / drift[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Strang self-convergence is second order")
{
    Setup s;
    SolverConfig ref_cfg;
    ref_cfg.dt = 1.25e-4;
    ref_cfg.t_end = 0.5;
    auto ref = evolve(s.f, s.w, s.T, ref_cfg).states.back();
    std::vector<double> err;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        SolverConfig c = ref_cfg;
        c.dt = dt;
        err.push_back(l2_distance(evolve(s.f, s.w, s.T, c).states.back(), ref));
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.2));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("time reversibility and backward evolution")
{
    Setup s;
    StrangStepper st(s.w, s.T);
    auto V = st.potential(s.f);
    ReducedField u = s.f;
    for (int k = 0; k < 100; ++k) u = st.step(u, 0.01, V);
    V = st.potential(u);
    for (int k = 0; k < 100; ++k) u = st.step(u, -0.01, V);
    CHECK(l2_distance(u, s.f) < 1e-8 * lp_norm(s.f, 2));

    SolverConfig c;
    c.dt = 0.01;
    c.t_end = -0.5;
    auto back = evolve(s.f, s.w, s.T, c);
    CHECK(back.times.back() == doctest::Approx(-0.5));
    CHECK(back.times[1] < 0);
    c.t_end = 0.5;
    auto fwd = evolve(conj(s.f), s.w, s.T, c);
    CHECK(l2_distance(back.states.back(), conj(fwd.states.back())) < 1e-13);
}

TEST_CASE("evolve rejects negative alpha and bad configs")
{
    RadialGrid g(40.0, 400);
    PointInteraction neg(-1 / (4 * pi));
    auto f = sample_reduced(g, [](double r) { return r * std::exp(-r * r / 2); });
    Potential w{PlainRadialField(g)};
    CHECK_THROWS_AS(evolve(f, w, neg, SolverConfig{}), DomainError);
    Setup s;
    SolverConfig c;
    c.dt = -1;
    CHECK_THROWS_AS(evolve(s.f, s.w, s.T, c), RangeError);
    c.dt = 0.01;
    c.blowup_threshold = 1e-6;
    CHECK_THROWS_AS(evolve(s.f, s.w, s.T, c), RangeError);
}

TEST_CASE("focusing nonlinearity terminates with exactly one cause")
{
    Setup s;
    Potential focusing(sample_plain(s.g, [](double r) { return -40 * std::exp(-4 * r * r); }));
    auto big = cplx(3.0) * s.f;
    SolverConfig c;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.blowup_threshold = 4 * evolve(big, focusing, s.T, SolverConfig{0.01, 0.0}).monitors[0].h_s_norm;
    auto tr = evolve(big, focusing, s.T, c);
    CHECK(tr.monitors.size() >= 1);
    if (tr.termination == Termination::blowup_flag)
        CHECK(tr.monitors.back().h_s_norm > tr.blowup_threshold);
    else if (tr.termination == Termination::completed)
        for (auto& m : tr.monitors) CHECK(m.h_s_norm <= tr.blowup_threshold);
    CHECK(tr.states.size() == tr.times.size());
}

TEST_CASE("Picard iteration")
{
    Setup s;
    SolverConfig c;
    c.dt = 1e-3;
    c.picard_tol = 1e-6;
    SUBCASE("w = 0 is linear after one iteration")
    {
        auto p = picard_window(s.f, s.zero, s.T, 0.05, c);
        CHECK(p.iterations == 1);
        CHECK(l2_distance(p.trajectory.states.back(), evolve_linear(s.f, *s.T, 0.05)) < 1e-13);
    }
    SUBCASE("contraction on the mass-scaled window")
    {
        double W = contraction_window(s.f, s.w);
        CHECK(W == doctest::Approx(1 / (4 * 2 * std::pow(pi, 1.5))).epsilon(1e-6));
        auto p = picard_window(s.f, s.w, s.T, W, c);
        for (double r : p.ratios) CHECK(r <= 0.5);
        CHECK(p.differences.back() < 1e-6);
    }
    SUBCASE("oversized windows are refused")
    {
        CHECK_THROWS_AS(picard_window(s.f, s.w, s.T, 64 * contraction_window(s.f, s.w), c), ContractionError);
        CHECK_THROWS_AS(picard_window(s.f, s.w, s.T, -1.0, c), RangeError);
    }
}

TEST_CASE("Picard and Strang agree to second order")
{
    Setup s;
    double W = 0.2;
    std::vector<double> diff;
    for (double dt : {0.02, 0.01}) {
        SolverConfig c;
        c.dt = dt;
        c.t_end = W;
        c.picard_tol = 1e-10;
        c.state_every = 1;
        auto p = picard_window(s.f, s.w, s.T, W, c);
        auto st = evolve(s.f, s.w, s.T, c);
        diff.push_back(sup_distance(p.trajectory, st));
    }
    CHECK(diff[0] / diff[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("stability tables")
{
    Setup s;
    SolverConfig c;
    c.dt = 0.02;
    c.t_end = 1.0;
    auto gdir = sample_reduced(s.g, [](double r) { return r * std::exp(-(r - 1) * (r - 1)); });
    Potential v(sample_plain(s.g, [](double r) { return std::exp(-r * r / 2); }));
    auto tab = stability_experiment(s.f, s.w, s.T, {0.0, 1e-2, 1e-3, 1e-4}, gdir, v, Perturb::both, c);
    CHECK(tab.rows[0].err_l2 == 0.0);
    CHECK(tab.spread <= 3.0);
    auto tw = stability_experiment(s.f, s.w, s.T, {1e-2, 1e-3, 1e-4}, gdir, v, Perturb::potential, c);
    CHECK(tw.spread <= 3.0);
}

TEST_CASE("globalization")
{
    Setup s;
    SolverConfig c;
    c.dt = 0.02;
    auto lin = globalization_check(s.f, s.zero, s.T, 2.0, c);
    CHECK(lin.sup_h1 == doctest::Approx(lin.initial_h1).epsilon(1e-12));
    CHECK(lin.max_violation <= 1e-8);
    auto rep = globalization_check(cplx(0.5) * s.f, s.w, s.T, 3.0, c, 2);
    CHECK(rep.inequality_holds);
    CHECK(rep.bounded);
    CHECK(rep.tested_masses.size() == 2);
    CHECK(rep.largest_bounded_mass > 0);
}

TEST_CASE("Friedrichs limit")
{
    Setup s;
    SolverConfig c;
    c.dt = 0.02;
    auto tab = free_limit_check(s.f, s.w, {1, 10, 100}, 0.5, c);
    CHECK(tab.decreasing);
    auto lin = free_limit_check(s.f, s.zero, {1, 10, 100, 1000}, 0.5, c);
    CHECK(lin.decreasing);
    CHECK(lin.rows.back().deviation < 1e-2);
    auto G = green_field(s.g, 1.0);
    CHECK_THROWS_AS(free_limit_check(G, s.w, {1}, 0.5, c), DomainError);
}

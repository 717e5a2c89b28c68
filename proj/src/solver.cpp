#include "shartree/solver.hpp"

#include <algorithm>
#include <cmath>

namespace sh {

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::completed: return "completed";
    case Termination::blowup_flag: return "blowup_flag";
    case Termination::aliasing_abort: return "aliasing_abort";
    }
    return "?";
}

double l2_distance(const ReducedField& a, const ReducedField& b) { return lp_norm(a - b, 2); }

StrangStepper::StrangStepper(const Potential& w, TransformPtr t) : t_(std::move(t))
{
    if (!(w.grid() == t_->grid())) throw RangeError("potential and transform grids differ");
    if (!w.is_zero()) conv_ = std::make_shared<const DensityConvolver>(w.profile);
}

std::vector<double> StrangStepper::potential(const ReducedField& u) const
{
    if (!conv_) return std::vector<double>(u.size(), 0.0);
    return conv_->apply(reduced_density(u));
}

ReducedField StrangStepper::step(const ReducedField& u, double dt, std::vector<double>& V) const
{
    if (dt == 0) return u;
    ReducedField a = u;
    if (conv_)
        for (int j = 0; j < a.size(); ++j) a[j] *= std::polar(1.0, -0.5 * dt * V[j]);
    a = t_->synthesize(evolve_coefficients(t_->coefficients(a), *t_, dt));
    if (conv_) {
        V = potential(a);
        for (int j = 0; j < a.size(); ++j) a[j] *= std::polar(1.0, -0.5 * dt * V[j]);
    }
    return a;
}

ReducedField strang_step(const ReducedField& u, const Potential& w, const RobinTransform& t, double dt)
{
    auto tp = std::shared_ptr<const RobinTransform>(&t, [](const RobinTransform*) {});
    StrangStepper s(w, tp);
    auto V = s.potential(u);
    return s.step(u, dt, V);
}

MonitorRecord monitor(const ReducedField& u, const std::vector<double>& V, const RobinTransform& t,
                      const SolverConfig& cfg, double time)
{
    MonitorRecord m;
    m.t = time;
    auto c = t.coefficients(u);
    m.mass = std::pow(lp_norm(u, 2), 2);
    m.half_form = 0.5 * spectral_form(c, t);
    m.energy = m.half_form + hartree_energy(V, u);
    m.h_s_norm = perturbed_norm_from_coefficients(c, t, cfg.monitor_s);
    m.l2_norm = std::sqrt(m.mass);
    m.lr_norm = lp_norm(u, cfg.monitor_r);
    m.tail_mass = spatial_tail_mass(u);
    return m;
}

Trajectory evolve(const ReducedField& f, const Potential& w, const TransformPtr& t, const SolverConfig& cfg)
{
    if (!t->op().is_friedrichs() && t->op().alpha() < 0) throw DomainError("the solver is restricted to alpha >= 0");
    if (!(cfg.dt > 0)) throw RangeError("solver.dt must be positive");
    const bool backward = cfg.t_end < 0;
    const double horizon = std::abs(cfg.t_end);
    const int steps = horizon == 0 ? 0 : static_cast<int>(std::ceil(horizon / cfg.dt - 1e-9));
    const double dt = steps ? horizon / steps : 0.0;
    const int every = cfg.state_every > 0 ? cfg.state_every : std::max(1, steps / 200);
    const double sign = backward ? -1.0 : 1.0;

    StrangStepper stepper(w, t);
    ReducedField u = backward ? conj(f) : f;
    auto V = stepper.potential(u);
    Trajectory traj;
    auto record_state = [&](double time, const ReducedField& s) {
        traj.times.push_back(time);
        traj.states.push_back(backward ? conj(s) : s);
    };
    record_state(0.0, u);
    traj.monitors.push_back(monitor(u, V, *t, cfg, 0.0));
    const double h0 = traj.monitors[0].h_s_norm;
    traj.blowup_threshold = cfg.blowup_threshold > 0 ? cfg.blowup_threshold : 1e3 * h0;
    if (!(traj.blowup_threshold > h0)) throw RangeError("blow-up threshold must exceed the initial norm");

    for (int k = 1; k <= steps; ++k) {
        u = stepper.step(u, dt, V);
        double time = sign * k * dt;
        auto m = monitor(u, V, *t, cfg, time);
        traj.monitors.push_back(m);
        bool last = k == steps;
        if (m.h_s_norm > traj.blowup_threshold) traj.termination = Termination::blowup_flag;
        else if (m.tail_mass > cfg.tail_limit) traj.termination = Termination::aliasing_abort;
        if (k % every == 0 || last || traj.termination != Termination::completed) record_state(time, u);
        if (traj.termination != Termination::completed) break;
    }
    return traj;
}

Trajectory evolve(const ReducedField& f, const Potential& w, const PointInteraction& op, const SolverConfig& cfg)
{
    return evolve(f, w, build_transform(f.grid, op, cfg.k_max), cfg);
}

double contraction_window(const ReducedField& f, const Potential& w)
{
    double M = std::pow(lp_norm(f, 2), 2);
    double wi = 0;
    for (int j = 0; j < w.grid().size(); ++j) wi = std::max(wi, std::abs(w[j]));
    if (M == 0 || wi == 0) return 1.0;
    return 1.0 / (4 * M * wi);
}

PicardResult picard_window(const ReducedField& f, const Potential& w, const TransformPtr& tp, double T,
                           const SolverConfig& cfg)
{
    if (!(T > 0)) throw RangeError("Picard window must be positive");
    const auto& t = *tp;
    int K = cfg.quadrature_nodes_per_window > 0 ? cfg.quadrature_nodes_per_window
                                                : static_cast<int>(std::ceil(T / cfg.dt - 1e-9));
    K = std::max(K, 4);
    const double dt = T / K;
    const int M = t.modes();
    const auto& ev = t.eigenvalues();
    StrangStepper nl(w, tp);

    auto cf = t.coefficients(f);
    std::vector<std::vector<cplx>> c(K + 1);
    for (int k = 0; k <= K; ++k) c[k] = evolve_coefficients(cf, t, k * dt);

    PicardResult res;
    auto finish = [&]() {
        for (int k = 0; k <= K; ++k) {
            auto u = t.synthesize(c[k]);
            auto V = nl.potential(u);
            res.trajectory.times.push_back(k * dt);
            res.trajectory.states.push_back(u);
            res.trajectory.monitors.push_back(monitor(u, V, t, cfg, k * dt));
        }
    };
    if (nl.linear()) {
        res.iterations = 1;
        res.differences.push_back(0.0);
        finish();
        return res;
    }

    int above = 0;
    for (int it = 1; it <= cfg.picard_max_iter; ++it) {
        // interaction picture integrand y(tau) = e^{i E tau} N^(tau)
        std::vector<std::vector<cplx>> y(K + 1);
        for (int k = 0; k <= K; ++k) {
            auto u = t.synthesize(c[k]);
            auto V = nl.potential(u);
            for (int j = 0; j < u.size(); ++j) u[j] *= V[j];
            y[k] = evolve_coefficients(t.coefficients(u), t, -k * dt);
        }
        std::vector<std::vector<cplx>> next(K + 1);
        std::vector<cplx> acc(M, 0.0);
        double sup = 0;
        for (int k = 0; k <= K; ++k) {
            if (k > 0) {
                int a = k - 1;
                for (int m = 0; m < M; ++m) {
                    cplx piece;
                    if (a == 0)
                        piece = 9.0 * y[0][m] + 19.0 * y[1][m] - 5.0 * y[2][m] + y[3][m];
                    else if (a == K - 1)
                        piece = y[K - 3][m] - 5.0 * y[K - 2][m] + 19.0 * y[K - 1][m] + 9.0 * y[K][m];
                    else
                        piece = -y[a - 1][m] + 13.0 * y[a][m] + 13.0 * y[a + 1][m] - y[a + 2][m];
                    acc[m] += piece * (dt / 24);
                }
            }
            std::vector<cplx> d(M);
            for (int m = 0; m < M; ++m) d[m] = cf[m] - cplx(0, 1) * acc[m];
            next[k] = evolve_coefficients(d, t, k * dt);
            double diff = 0;
            for (int m = 0; m < M; ++m) diff += std::norm(next[k][m] - c[k][m]);
            sup = std::max(sup, std::sqrt(4 * pi * diff));
        }
        (void)ev;
        c.swap(next);
        res.iterations = it;
        res.differences.push_back(sup);
        if (res.differences.size() >= 2) {
            double r = sup / res.differences[res.differences.size() - 2];
            res.ratios.push_back(r);
            above = r > 1 ? above + 1 : 0;
            if (above >= 3) throw ContractionError("Picard map is not contracting on this window");
        }
        if (sup < cfg.picard_tol) {
            finish();
            return res;
        }
    }
    throw ContractionError("Picard iteration cap reached before convergence");
}

StabilityTable stability_experiment(const ReducedField& f, const Potential& w, const TransformPtr& t,
                                    const std::vector<double>& scales, const ReducedField& g, const Potential& v,
                                    Perturb mode, const SolverConfig& cfg)
{
    StabilityTable tab;
    tab.mode = mode;
    auto base = evolve(f, w, t, cfg);
    if (base.termination != Termination::completed) throw WindowError("base run did not complete");
    for (double eps : scales) {
        ReducedField fn = f;
        PlainRadialField wn = w.profile;
        if (mode != Perturb::potential) fn = f + cplx(eps) * g;
        if (mode != Perturb::datum)
            for (int j = 0; j < wn.size(); ++j) wn[j] += eps * v[j];
        auto run = evolve(fn, Potential(wn), t, cfg);
        StabilityRow row;
        row.eps = eps;
        std::size_t n = std::min(run.states.size(), base.states.size());
        for (std::size_t i = 0; i < n; ++i) {
            auto d = run.states[i] - base.states[i];
            row.err_l2 = std::max(row.err_l2, lp_norm(d, 2));
            row.err_hs = std::max(row.err_hs, perturbed_norm(d, *t, cfg.monitor_s));
        }
        row.ratio = eps > 0 ? row.err_l2 / eps : 0.0;
        tab.rows.push_back(row);
    }
    double lo = infinity, hi = 0;
    for (auto& r : tab.rows)
        if (r.eps > 0) {
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
    tab.spread = hi > 0 ? hi / lo : 0.0;
    return tab;
}

GlobalizationReport globalization_check(const ReducedField& f, const Potential& w, const TransformPtr& t,
                                        double long_horizon, const SolverConfig& cfg_in, int mass_sweep)
{
    SolverConfig cfg = cfg_in;
    cfg.t_end = long_horizon;
    cfg.monitor_s = 1.0;
    GlobalizationReport rep;
    auto traj = evolve(f, w, t, cfg);
    rep.termination = traj.termination;
    const auto& m0 = traj.monitors.front();
    rep.initial_h1 = m0.h_s_norm;
    rep.bound = std::sqrt((m0.mass + 2 * m0.energy) / (4 * pi));
    rep.max_violation = -infinity;
    for (auto& m : traj.monitors) {
        rep.max_violation = std::max(rep.max_violation, m.half_form - m.energy);
        rep.sup_h1 = std::max(rep.sup_h1, m.h_s_norm);
    }
    rep.bound_ratio = rep.sup_h1 / rep.bound;
    rep.inequality_holds = rep.max_violation <= 1e-8;
    rep.bounded = traj.termination == Termination::completed && rep.bound_ratio <= 1.1;

    // small-mass branch: largest tested mass whose H^1 norm stays within 10x of its start
    double scale = 1.0;
    for (int i = 0; i < mass_sweep; ++i, scale *= 0.5) {
        auto fs = cplx(scale) * f;
        auto tr = evolve(fs, w, t, cfg);
        double mass = tr.monitors.front().mass, sup = 0;
        for (auto& m : tr.monitors) sup = std::max(sup, m.h_s_norm);
        rep.tested_masses.push_back(mass);
        bool ok = tr.termination == Termination::completed && sup <= 10 * tr.monitors.front().h_s_norm;
        if (ok) rep.largest_bounded_mass = std::max(rep.largest_bounded_mass, mass);
    }
    return rep;
}

FreeLimitTable free_limit_check(const ReducedField& f, const Potential& w, const std::vector<double>& alphas, double T,
                                const SolverConfig& cfg_in)
{
    if (std::abs(f[0]) > 1e-12 * std::max(1.0, max_abs(f.values)))
        throw DomainError("free-limit comparison needs regular data (f(0) = 0)");
    SolverConfig cfg = cfg_in;
    cfg.t_end = T;
    auto ref = evolve(f, w, PointInteraction::friedrichs(), cfg);
    FreeLimitTable tab;
    for (double a : alphas) {
        auto run = evolve(f, w, PointInteraction(a), cfg);
        FreeLimitRow row{PointInteraction(a).label(), 0.0};
        std::size_t n = std::min(run.states.size(), ref.states.size());
        for (std::size_t i = 0; i < n; ++i) row.deviation = std::max(row.deviation, l2_distance(run.states[i], ref.states[i]));
        tab.rows.push_back(row);
    }
    tab.decreasing = true;
    for (std::size_t i = 1; i < tab.rows.size(); ++i)
        if (!(tab.rows[i].deviation < tab.rows[i - 1].deviation - 1e-8)) tab.decreasing = false;
    return tab;
}

} // namespace sh

#include "shartree/propagator.hpp"

#include <cmath>

#include "shartree/quadrature.hpp"
#include "shartree/solver.hpp"

namespace sh {

std::vector<cplx> evolve_coefficients(const std::vector<cplx>& c, const RobinTransform& t, double time)
{
    std::vector<cplx> out(c.size());
    const auto& ev = t.eigenvalues();
    for (std::size_t m = 0; m < c.size(); ++m) out[m] = std::polar(1.0, -ev[m] * time) * c[m];
    return out;
}

ReducedField evolve_linear(const ReducedField& psi, const RobinTransform& t, double time, Diagnostics* diag)
{
    if (time == 0) return psi;
    auto out = t.synthesize(evolve_coefficients(t.coefficients(psi), t, time));
    if (diag && spatial_tail_mass(out) > 0.01) diag->warn("evolved field reached the outer 10% of the grid");
    return out;
}

AdmissiblePair admissible_pair(double r)
{
    if (!(r >= 2 && r < 3)) throw RangeError("admissible pairs need r in [2, 3)");
    AdmissiblePair p;
    p.r = r;
    p.q = r == 2 ? std::numeric_limits<double>::infinity() : 4 * r / (3 * (r - 2));
    double lhs = std::isinf(p.q) ? 0.0 : 2 / p.q;
    if (std::abs(lhs - 3 * (0.5 - 1 / r)) > 1e-12) throw RangeError("admissibility identity violated");
    return p;
}

double decay_target(double r) { return -3 * (0.5 - 1 / r); }

DecayReport dispersive_decay_experiment(const ReducedField& psi0, const RobinTransform& t, double r,
                                        const std::vector<double>& times, double tail_limit)
{
    admissible_pair(r);
    if (times.size() < 8) throw RangeError("decay fits need at least 8 sample times");
    DecayReport rep;
    rep.r = r;
    rep.target = decay_target(r);
    auto c0 = t.coefficients(psi0);
    std::vector<double> lt, ln;
    double prev = 0;
    for (double tm : times) {
        if (!(tm > prev)) throw RangeError("decay times must be positive and increasing");
        prev = tm;
        auto u = t.synthesize(evolve_coefficients(c0, t, tm));
        if (spatial_tail_mass(u) > tail_limit) throw WindowError("field left the grid during the decay sweep");
        double nr = lp_norm(u, r);
        rep.times.push_back(tm);
        rep.norms.push_back(nr);
        lt.push_back(std::log(tm));
        ln.push_back(std::log(nr));
    }
    rep.slope = ols_slope(lt, ln);
    rep.pass = r == 2 ? std::abs(rep.slope) <= 0.01 : std::abs(rep.slope - rep.target) <= 0.05 * std::abs(rep.target);
    return rep;
}

double strichartz_norm(const std::vector<double>& times, const std::vector<ReducedField>& states, double q, double r)
{
    if (times.size() != states.size() || times.empty()) throw RangeError("strichartz_norm needs matching samples");
    std::vector<double> v;
    for (auto& s : states) v.push_back(lp_norm(s, r));
    if (std::isinf(q)) return *std::max_element(v.begin(), v.end());
    double acc = 0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        acc += 0.5 * (times[i + 1] - times[i]) * (std::pow(v[i], q) + std::pow(v[i + 1], q));
    return std::pow(acc, 1 / q);
}

double strichartz_norm(const Trajectory& traj, double q, double r)
{
    return strichartz_norm(traj.times, traj.states, q, r);
}

std::vector<double> log_spaced(double t0, double t1, int count)
{
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(t0 * std::pow(t1 / t0, i / double(count - 1)));
    return out;
}

} // namespace sh

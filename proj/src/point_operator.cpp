#include "shartree/point_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shartree/quadrature.hpp"

namespace sh {

PointInteraction::PointInteraction(double alpha) : alpha_(alpha)
{
    if (!std::isfinite(alpha)) throw RangeError("alpha must be finite; use PointInteraction::friedrichs()");
}

PointInteraction PointInteraction::friedrichs()
{
    PointInteraction p;
    p.friedrichs_ = true;
    return p;
}

double PointInteraction::alpha() const
{
    return friedrichs_ ? std::numeric_limits<double>::infinity() : alpha_;
}

double PointInteraction::beta() const
{
    return friedrichs_ ? std::numeric_limits<double>::infinity() : 4 * pi * alpha_;
}

double PointInteraction::scattering_length() const
{
    if (friedrichs_) return 0.0;
    if (alpha_ == 0) return std::numeric_limits<double>::infinity();
    return -1.0 / (4 * pi * alpha_);
}

std::string PointInteraction::label() const
{
    if (friedrichs_) return "friedrichs";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", alpha_);
    return buf;
}

std::vector<cplx> first_derivative(const std::vector<cplx>& f, double h)
{
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<cplx> d(n + 1);
    const double c = 1.0 / (12 * h);
    for (int j = 2; j <= n - 2; ++j) d[j] = c * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    d[n] = -c * (-25.0 * f[n] + 48.0 * f[n - 1] - 36.0 * f[n - 2] + 16.0 * f[n - 3] - 3.0 * f[n - 4]);
    d[n - 1] = -c * (-3.0 * f[n] - 10.0 * f[n - 1] + 18.0 * f[n - 2] - 6.0 * f[n - 3] + f[n - 4]);
    return d;
}

std::vector<cplx> second_derivative(const std::vector<cplx>& f, double h)
{
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<cplx> d(n + 1);
    const double c = 1.0 / (12 * h * h);
    for (int j = 2; j <= n - 2; ++j)
        d[j] = c * (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]);
    auto edge = [&](int j0, int s, int j) {
        auto F = [&](int k) { return f[j0 + s * k]; };
        if (j == 0) return c * (45.0 * F(0) - 154.0 * F(1) + 214.0 * F(2) - 156.0 * F(3) + 61.0 * F(4) - 10.0 * F(5));
        return c * (10.0 * F(0) - 15.0 * F(1) - 4.0 * F(2) + 14.0 * F(3) - 6.0 * F(4) + F(5));
    };
    d[0] = edge(0, 1, 0);
    d[1] = edge(0, 1, 1);
    d[n] = edge(n, -1, 0);
    d[n - 1] = edge(n, -1, 1);
    return d;
}

double quadratic_form(const DecomposedState& st, const PointInteraction& op)
{
    const auto& g = st.phi.grid;
    const double lam = st.lambda;
    if (op.is_friedrichs() && std::abs(st.kappa) > 1e-10 * std::max(1.0, max_abs(st.phi.values)))
        throw DomainError("Friedrichs form is undefined on fields with a Green-function component");
    auto w = simpson_weights(g);
    auto dphi = first_derivative(st.phi.values, g.h);
    double grad = 0, phi2 = 0;
    for (int j = 0; j <= g.n; ++j) {
        grad += w[j] * std::norm(dphi[j]);
        phi2 += w[j] * std::norm(st.phi[j]);
    }
    grad *= 4 * pi;
    phi2 *= 4 * pi;
    if (op.is_friedrichs()) return grad;
    double psi2 = std::pow(lp_norm(recompose(st), 2), 2);
    return -lam * psi2 + grad + lam * phi2 + (op.alpha() + std::sqrt(lam) / (4 * pi)) * std::norm(st.kappa);
}

ReducedField apply_operator(const ReducedField& psi, const PointInteraction& op, double lambda, double tol)
{
    auto dom = in_operator_domain(psi, lambda, op);
    double scale = std::max({std::abs(dom.phi0), std::abs(dom.kappa) / (4 * pi), 1e-12 * max_abs(psi.values)});
    if (tol < 0) tol = 1e-4;
    if (dom.residual > tol * scale * (op.is_friedrichs() ? 1.0 : 4 * pi) && dom.residual > 1e-300)
        throw DomainError("field violates the Robin charge link of the operator domain");
    auto st = decompose(psi, lambda);
    auto d2 = second_derivative(st.phi.values, psi.grid.h);
    ReducedField out(psi.grid);
    for (int j = 0; j < psi.size(); ++j) out[j] = -d2[j] + lambda * st.phi[j] - lambda * psi[j];
    return out;
}

BethePeierlsFit bethe_peierls_residual(const ReducedField& psi, const PointInteraction& /*op*/, int window)
{
    const auto& g = psi.grid;
    std::vector<double> x, yr, yi;
    for (int j = 0; j <= window; ++j) {
        x.push_back(g.r(j));
        yr.push_back(psi[j].real());
        yi.push_back(psi[j].imag());
    }
    std::vector<std::function<double(double)>> basis = {
        [](double) { return 1.0; }, [](double r) { return r; }, [](double r) { return r * r; },
        [](double r) { return r * r * r; }};
    auto cr = least_squares(x, yr, basis), ci = least_squares(x, yi, basis);
    BethePeierlsFit fit;
    fit.c = cplx(cr[0], ci[0]);
    cplx d(cr[1], ci[1]);
    fit.degenerate = std::abs(fit.c) < 1e-6 * std::max(max_abs(psi.values), 1e-300);
    if (fit.degenerate) {
        fit.inv_a = std::numeric_limits<double>::quiet_NaN();
        fit.residual = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    fit.inv_a = -(d / fit.c).real();
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cplx model = fit.c * (1 - x[i] * fit.inv_a);
        ss += std::norm(cplx(yr[i], yi[i]) - model);
    }
    fit.residual = std::sqrt(ss / x.size()) / std::abs(fit.c);
    return fit;
}

cplx radial_fourier(const ReducedField& psi, double p)
{
    const double norm = std::pow(2 * pi, -1.5);
    if (p == 0) {
        cplx s = 0;
        auto w = simpson_weights(psi.grid);
        for (int j = 0; j < psi.size(); ++j) s += w[j] * psi.grid.r(j) * psi[j];
        return norm * 4 * pi * s;
    }
    return norm * (4 * pi / p) * filon_sine(psi.values, psi.grid.h, p);
}

TmsFit tms_residual(const ReducedField& psi, const PointInteraction& op, const std::vector<double>& R_list,
                    Diagnostics* diag)
{
    if (R_list.size() < 4) throw RangeError("tms_residual needs at least four radii");
    std::vector<double> R = R_list;
    std::sort(R.begin(), R.end());
    if (diag && R.back() * psi.grid.h > 1) diag->warn("momentum cutoff not resolved by the grid (R h > 1)");
    const double shell = std::pow(2 * pi, -1.5) * 16 * pi * pi;
    TmsFit fit;
    double acc = 0, prev = 0;
    for (double Rk : R) {
        auto q = gauss_composite(prev, Rk, 0.5, 16);
        for (std::size_t i = 0; i < q.x.size(); ++i)
            acc += q.w[i] * q.x[i] * filon_sine(psi.values, psi.grid.h, q.x[i]).real();
        prev = Rk;
        fit.R.push_back(Rk);
        fit.I.push_back(shell * acc);
    }
    auto c = least_squares(fit.R, fit.I,
                           {[](double x) { return x; }, [](double) { return 1.0; }, [](double x) { return 1 / x; },
                            [](double x) { return 1 / (x * x); }});
    fit.slope = c[0];
    fit.intercept = c[1];
    double Imax = 0;
    for (double v : fit.I) Imax = std::max(Imax, std::abs(v));
    fit.vacuous = std::abs(fit.slope) * R.back() < 1e-3 * Imax;
    fit.ratio = fit.intercept / fit.slope;
    fit.target = op.is_friedrichs() ? std::numeric_limits<double>::infinity() : 2 * pi * pi * op.alpha();
    if (op.is_friedrichs())
        fit.deviation = std::numeric_limits<double>::infinity();
    else if (fit.target == 0)
        fit.deviation = std::abs(fit.ratio);
    else
        fit.deviation = std::abs(fit.ratio - fit.target) / std::abs(fit.target);
    return fit;
}

SpectrumSummary spectrum(const PointInteraction& op, const RadialGrid* grid)
{
    SpectrumSummary s;
    if (op.is_friedrichs() || op.alpha() >= 0) return s;
    double k = 4 * pi * std::abs(op.alpha());
    s.eigenvalue = -k * k;
    if (grid) s.eigenfunction = sample_reduced(*grid, [&](double r) { return std::exp(-k * r); });
    return s;
}

ReducedField domain_element(const ReducedField& phi, const PointInteraction& op, double lambda,
                            std::optional<cplx> phi0)
{
    if (op.is_friedrichs()) return phi;
    cplx p0 = phi0 ? *phi0 : regular_value_at_origin(phi);
    cplx kappa = p0 / (op.alpha() + std::sqrt(lambda) / (4 * pi));
    DecomposedState st{phi, kappa, lambda};
    return recompose(st);
}

} // namespace sh

#include "shartree/radial.hpp"

#include <algorithm>
#include <cmath>

#include "shartree/quadrature.hpp"

namespace sh {

Potential::Potential(PlainRadialField w, double singular_exponent_)
    : profile(std::move(w)), singular_exponent(singular_exponent_)
{
    for (auto& v : profile.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("potential has non-finite samples");
        if (v.imag() != 0.0) throw DomainError("potential must be real-valued");
    }
}

bool Potential::nonnegative() const
{
    return std::all_of(profile.values.begin(), profile.values.end(), [](cplx v) { return v.real() >= 0; });
}

bool Potential::is_zero() const
{
    return std::all_of(profile.values.begin(), profile.values.end(), [](cplx v) { return v == 0.0; });
}

double evaluate_green(double lambda, double r)
{
    if (!(lambda > 0)) throw DomainError("green function needs lambda > 0");
    if (!(r > 0)) throw DomainError("green function needs r > 0");
    return std::exp(-std::sqrt(lambda) * r) / (4 * pi * r);
}

double green_reduced(double lambda, double r)
{
    if (!(lambda > 0)) throw DomainError("green function needs lambda > 0");
    if (r < 0) throw DomainError("green function needs r >= 0");
    return std::exp(-std::sqrt(lambda) * r) / (4 * pi);
}

ReducedField green_field(const RadialGrid& g, double lambda)
{
    return sample_reduced(g, [&](double r) { return green_reduced(lambda, r); });
}

namespace {

bool singular_at_origin(const ReducedField& f)
{
    return std::abs(f[0]) > 1e-10 * std::max(max_abs(f.values), 1e-300);
}

} // namespace

double lp_norm(const ReducedField& psi, double p)
{
    if (!(p >= 1)) throw RangeError("lp_norm needs p >= 1");
    const auto& g = psi.grid;
    const int n = g.n;
    if (max_abs(psi.values) == 0) return 0;
    bool sing = singular_at_origin(psi);

    if (std::isinf(p)) {
        if (sing) throw DivergenceError("psi has a 1/r singularity; not in L^inf");
        double m = std::abs(extrapolate_zero(psi[1] / g.r(1), psi[2] / g.r(2), psi[3] / g.r(3)));
        for (int j = 1; j <= n; ++j) m = std::max(m, std::abs(psi[j]) / g.r(j));
        return m;
    }
    if (sing && p >= 3) throw DivergenceError("psi has a 1/r singularity; not locally in L^p for p >= 3");

    auto w = simpson_weights(g);
    double mu = 2 - p;
    auto integrand = [&](int j) {
        if (j == 0) return mu == 0 ? std::norm(psi[0]) : 0.0;
        return std::pow(std::abs(psi[j]), p) * std::pow(g.r(j), mu);
    };
    double s = 0;
    bool product_rule = sing && mu != 0 && mu != 1;
    if (!product_rule) {
        for (int j = 0; j <= n; ++j) s += w[j] * integrand(j);
    } else {
        // first panel: |f|^p quadratic, r^mu weight integrated exactly
        auto m = [&](int k) { return std::pow(2.0, mu + k + 1) / (mu + k + 1); };
        double c0 = 0.5 * (m(2) - 3 * m(1) + 2 * m(0));
        double c1 = -(m(2) - 2 * m(1));
        double c2 = 0.5 * (m(2) - m(1));
        double hp = std::pow(g.h, mu + 1);
        s += hp * (c0 * std::pow(std::abs(psi[0]), p) + c1 * std::pow(std::abs(psi[1]), p) +
                   c2 * std::pow(std::abs(psi[2]), p));
        for (int j = 2; j <= n; ++j) {
            double wj = (j == 2 || j == n) ? g.h / 3 : w[j];
            s += wj * integrand(j);
        }
    }
    return std::pow(4 * pi * s, 1.0 / p);
}

double lorentz_weak_norm(const Potential& w, double q)
{
    if (!(q > 1)) throw RangeError("lorentz_weak_norm needs q > 1");
    const auto& g = w.grid();
    const int n = g.n;
    std::vector<double> a(n + 1);
    for (int j = 0; j <= n; ++j) a[j] = std::abs(w[j]);
    // measure of {|w|_lin >= t}, |w| linear on each cell
    auto measure = [&](double t) {
        double mu = 0;
        for (int j = 0; j < n; ++j) {
            double a0 = a[j], a1 = a[j + 1], r0 = g.r(j), r1 = g.r(j + 1);
            double lo, hi;
            if (a0 >= t && a1 >= t) {
                lo = r0;
                hi = r1;
            } else if (a0 < t && a1 < t) {
                continue;
            } else {
                double rc = r0 + (t - a0) / (a1 - a0) * g.h;
                if (a0 >= t) {
                    lo = r0;
                    hi = rc;
                } else {
                    lo = rc;
                    hi = r1;
                }
            }
            mu += 4 * pi / 3 * (hi * hi * hi - lo * lo * lo);
        }
        return mu;
    };
    double best = 0;
    for (int j = 0; j <= n; ++j) {
        double t = a[j];
        if (t <= 0) continue;
        best = std::max(best, t * std::pow(measure(t), 1.0 / q));
    }
    return best;
}

namespace {

// L[i][j] such that V_i = sum_j L_ij P_j with P = s^2 g
template <class Scalar, class Emit>
void convolution_kernel(const RadialGrid& g, const std::vector<Scalar>& w, Emit&& emit, Diagnostics* diag)
{
    const int n = g.n;
    const double h = g.h;
    std::vector<double> tw_re(n + 1), tw_im(n + 1);
    for (int j = 0; j <= n; ++j) {
        cplx v = w[j];
        tw_re[j] = g.r(j) * v.real();
        tw_im[j] = g.r(j) * v.imag();
    }
    auto Wr = cumulative_integral(tw_re, h), Wi = cumulative_integral(tw_im, h);
    std::vector<Scalar> W(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) {
        int kk = std::min(k, n);
        if constexpr (std::is_same_v<Scalar, double>)
            W[k] = Wr[kk];
        else
            W[k] = cplx(Wr[kk], Wi[kk]);
    }
    if (diag) {
        double wmax = 0, edge = 0;
        for (int j = 0; j <= n; ++j) {
            wmax = std::max(wmax, std::abs(w[j]));
            if (j >= n - n / 20) edge = std::max(edge, std::abs(w[j]));
        }
        if (edge > 1e-8 * wmax) diag->warn("convolution truncated: w is not negligible near r_max");
    }
    auto om = simpson_weights(g);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            Scalar v;
            if (i == 0)
                v = 4 * pi * om[j] * w[j];
            else if (j == 0)
                v = 4 * pi * om[0] * w[i];
            else
                v = (2 * pi / (g.r(i) * g.r(j))) * om[j] * (W[i + j] - W[std::abs(i - j)]);
            emit(i, j, v);
        }
    }
}

} // namespace

PlainRadialField radial_convolve(const PlainRadialField& w, const PlainRadialField& g, Diagnostics* diag)
{
    if (!(w.grid == g.grid)) throw RangeError("radial_convolve needs a shared grid");
    const auto& gr = w.grid;
    const int n = gr.n;
    auto one_side = [&](const std::vector<cplx>& a, const std::vector<cplx>& b, Diagnostics* d) {
        std::vector<cplx> P(n + 1), out(n + 1, 0.0);
        for (int j = 0; j <= n; ++j) P[j] = gr.r(j) * gr.r(j) * b[j];
        convolution_kernel<cplx>(gr, a, [&](int i, int j, cplx v) { out[i] += v * P[j]; }, d);
        return out;
    };
    auto ab = one_side(w.values, g.values, diag);
    auto ba = one_side(g.values, w.values, nullptr);
    PlainRadialField out(gr);
    for (int j = 0; j <= n; ++j) out[j] = 0.5 * (ab[j] + ba[j]);
    return out;
}

DensityConvolver::DensityConvolver(const PlainRadialField& w, Diagnostics* diag)
    : grid_(w.grid), L_(w.grid.n + 1, w.grid.n + 1)
{
    std::vector<double> wr(w.size());
    for (int j = 0; j < w.size(); ++j) wr[j] = w[j].real();
    convolution_kernel<double>(grid_, wr, [&](int i, int j, double v) { L_(i, j) = v; }, diag);
}

std::vector<double> DensityConvolver::apply(const std::vector<double>& P) const
{
    Eigen::Map<const Eigen::VectorXd> p(P.data(), P.size());
    Eigen::VectorXd v = L_ * p;
    return {v.data(), v.data() + v.size()};
}

std::vector<cplx> DensityConvolver::apply(const std::vector<cplx>& P) const
{
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>> p(
        reinterpret_cast<const double*>(P.data()), P.size(), 2);
    Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor> v = L_ * p;
    std::vector<cplx> out(P.size());
    for (std::size_t j = 0; j < P.size(); ++j) out[j] = cplx(v(j, 0), v(j, 1));
    return out;
}

DecomposedState decompose(const ReducedField& psi, double lambda)
{
    if (!(lambda > 0)) throw DomainError("decompose needs lambda > 0");
    DecomposedState s;
    s.lambda = lambda;
    s.kappa = 4 * pi * psi[0];
    s.phi = ReducedField(psi.grid);
    for (int j = 0; j < psi.size(); ++j) s.phi[j] = psi[j] - psi[0] * (4 * pi * green_reduced(lambda, psi.grid.r(j)));
    s.phi[0] = 0;
    return s;
}

ReducedField recompose(const DecomposedState& s)
{
    ReducedField out(s.phi.grid);
    for (int j = 0; j < out.size(); ++j) out[j] = s.phi[j] + s.kappa * green_reduced(s.lambda, out.grid.r(j));
    return out;
}

cplx regular_value_at_origin(const ReducedField& phi)
{
    // quartic through nodes 1..5, evaluated at r = 0
    const auto& g = phi.grid;
    if (g.n < 5) return extrapolate_zero(phi[1] / g.r(1), phi[2] / g.r(2), phi[3] / g.r(3));
    static const double c[] = {5, -10, 10, -5, 1};
    cplx v = 0;
    for (int j = 1; j <= 5; ++j) v += c[j - 1] * phi[j] / g.r(j);
    return v;
}

DomainResidual in_operator_domain(const ReducedField& psi, double lambda, const PointInteraction& op)
{
    auto s = decompose(psi, lambda);
    DomainResidual d;
    d.kappa = s.kappa;
    d.phi0 = regular_value_at_origin(s.phi);
    if (op.is_friedrichs())
        d.residual = std::abs(s.kappa);
    else
        d.residual = std::abs(d.phi0 - (op.alpha() + std::sqrt(lambda) / (4 * pi)) * s.kappa);
    return d;
}

double spatial_tail_mass(const ReducedField& psi, double frac)
{
    auto w = simpson_weights(psi.grid);
    double tot = 0, tail = 0;
    for (int j = 0; j < psi.size(); ++j) {
        double m = w[j] * std::norm(psi[j]);
        tot += m;
        if (psi.grid.r(j) > frac * psi.grid.r_max) tail += m;
    }
    return tot > 0 ? tail / tot : 0.0;
}

} // namespace sh

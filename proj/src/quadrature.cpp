#include "shartree/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <Eigen/Dense>
#include <cmath>

namespace sh {

GaussRule gauss_legendre(int n, double a, double b)
{
    GaussRule g;
    auto zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> x, w;
    for (double z : zeros) {
        double dp = boost::math::legendre_p_prime(n, z);
        double wt = 2.0 / ((1 - z * z) * dp * dp);
        x.push_back(z);
        w.push_back(wt);
        if (z != 0) {
            x.push_back(-z);
            w.push_back(wt);
        }
    }
    double c = 0.5 * (a + b), d = 0.5 * (b - a);
    std::vector<std::size_t> idx(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    for (auto i : idx) {
        g.x.push_back(c + d * x[i]);
        g.w.push_back(d * w[i]);
    }
    return g;
}

GaussRule gauss_composite(double a, double b, double panel, int m)
{
    GaussRule out;
    if (b <= a) return out;
    int np = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    double len = (b - a) / np;
    auto base = gauss_legendre(m, 0.0, len);
    for (int p = 0; p < np; ++p) {
        for (std::size_t i = 0; i < base.x.size(); ++i) {
            out.x.push_back(a + p * len + base.x[i]);
            out.w.push_back(base.w[i]);
        }
    }
    return out;
}

cplx filon_sine(const std::vector<cplx>& f, double h, double p)
{
    int n = static_cast<int>(f.size()) - 1;
    double th = p * h;
    double al, be, ga;
    if (std::abs(th) < 1.0 / 6.0) {
        double t2 = th * th, t3 = t2 * th, t4 = t2 * t2, t5 = t4 * th, t6 = t4 * t2, t7 = t6 * th;
        al = 2 * t3 / 45 - 2 * t5 / 315 + 2 * t7 / 4725;
        be = 2.0 / 3 + 2 * t2 / 15 - 4 * t4 / 105 + 2 * t6 / 567;
        ga = 4.0 / 3 - 2 * t2 / 15 + t4 / 210 - t6 / 11340;
    } else {
        double s = std::sin(th), c = std::cos(th);
        al = 1 / th + std::sin(2 * th) / (2 * th * th) - 2 * s * s / (th * th * th);
        be = 2 * ((1 + c * c) / (th * th) - std::sin(2 * th) / (th * th * th));
        ga = 4 * (s / (th * th * th) - c / (th * th));
    }
    double x_end = n * h;
    cplx s_even = 0, s_odd = 0;
    for (int j = 0; j <= n; j += 2) s_even += f[j] * std::sin(p * j * h);
    s_even -= 0.5 * (f[n] * std::sin(p * x_end) + f[0] * 0.0);
    for (int j = 1; j < n; j += 2) s_odd += f[j] * std::sin(p * j * h);
    return h * (al * (f[0] - f[n] * std::cos(p * x_end)) + be * s_even + ga * s_odd);
}

std::vector<double> cumulative_integral(const std::vector<double>& f, double h)
{
    int n = static_cast<int>(f.size()) - 1;
    std::vector<double> F(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
        double piece;
        if (k == 0)
            piece = 9 * f[0] + 19 * f[1] - 5 * f[2] + f[3];
        else if (k == n - 1)
            piece = f[n - 3] - 5 * f[n - 2] + 19 * f[n - 1] + 9 * f[n];
        else
            piece = -f[k - 1] + 13 * f[k] + 13 * f[k + 1] - f[k + 2];
        F[k + 1] = F[k] + piece * h / 24;
    }
    return F;
}

std::vector<double> least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<std::function<double(double)>>& basis)
{
    Eigen::MatrixXd A(x.size(), basis.size());
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < basis.size(); ++k) A(i, k) = basis[k](x[i]);
        b(i) = y[i];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    auto c = least_squares(x, y, {[](double) { return 1.0; }, [](double t) { return t; }});
    return c[1];
}

} // namespace sh

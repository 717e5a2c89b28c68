#pragma once

#include <functional>
#include <vector>

#include "shartree/grid.hpp"

namespace sh {

struct GaussRule {
    std::vector<double> x, w;
};

// n-point Gauss-Legendre on [a, b]
GaussRule gauss_legendre(int n, double a, double b);
// composite rule: panels of width <= panel, m points each
GaussRule gauss_composite(double a, double b, double panel, int m = 16);

// int_0^{r_max} f(r) sin(p r) dr, Filon-Simpson on the uniform grid
cplx filon_sine(const std::vector<cplx>& f, double h, double p);

// running integral F(r_j) = int_0^{r_j} f, fourth order
std::vector<double> cumulative_integral(const std::vector<double>& f, double h);

// value at 0 from samples at h, 2h, 3h (quadratic extrapolation)
template <class T>
T extrapolate_zero(const T& q1, const T& q2, const T& q3)
{
    return 3.0 * q1 - 3.0 * q2 + q3;
}

// ordinary least squares, columns of the design given as functions of x
std::vector<double> least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<std::function<double(double)>>& basis);

// slope of the OLS line through (x, y)
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sh

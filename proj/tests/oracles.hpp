#pragma once

#include <complex>
#include <functional>

// Reference values computed without the library's radial machinery.

namespace oracle {

using cplx = std::complex<double>;

// (w * g)(x) with |x| = r by a tensor Gauss rule on the cube [-L, L]^3 (brute force)
double convolution_3d(const std::function<double(double)>& w, const std::function<double(double)>& g, double r,
                      double L = 7.0, int panels = 14);

// ||G_lambda||_2^2 = 1 / (8 pi sqrt(lambda))
double green_norm_sq(double lambda);

// 1/4 int int a exp(-b|x-y|^2) |psi(x)|^2 |psi(y)|^2 with psi = A exp(-r^2 / 2)
double gaussian_hartree_energy(double A, double a, double b);

// ||grad psi||^2 for psi = A exp(-r^2 / (2 sigma^2)) in 3D
double gaussian_dirichlet(double A, double sigma);
double gaussian_mass(double A, double sigma);

// free evolution e^{it Delta} of exp(-r^2 / (2 sigma^2)), returned as a plain radial value
cplx free_gaussian(double sigma, double t, double r);

// ||(1 - Delta)^{s/2} w||_p for radial w given by its 3D Fourier transform w_hat(k),
// using a plain Gauss rule in k and Simpson in r; independent of the library's Filon path
double bessel_potential_norm(const std::function<double(double)>& w_hat, double s, double p, double k_max,
                             double r_max, int nr = 2000);

} // namespace oracle

#pragma once

#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "shartree/grid.hpp"
#include "shartree/point_interaction.hpp"

namespace sh {

struct Potential {
    PlainRadialField profile;
    std::map<std::string, double> cached_norms;
    // local power law near the origin when known from construction, else estimated
    double singular_exponent = -1;

    Potential() = default;
    explicit Potential(PlainRadialField w, double singular_exponent = -1);

    const RadialGrid& grid() const { return profile.grid; }
    double operator[](int j) const { return profile[j].real(); }
    bool nonnegative() const;
    bool is_zero() const;
};

struct DecomposedState {
    ReducedField phi;
    cplx kappa = 0;
    double lambda = 1;
};

double evaluate_green(double lambda, double r);
double green_reduced(double lambda, double r);
ReducedField green_field(const RadialGrid& g, double lambda);

// 3D L^p norm of psi = f/r; throws DivergenceError when psi is not locally L^p
double lp_norm(const ReducedField& psi, double p);
inline constexpr double infinity = std::numeric_limits<double>::infinity();

double lorentz_weak_norm(const Potential& w, double q);

// (w * g)(r) for bounded radial g; symmetric in its arguments
PlainRadialField radial_convolve(const PlainRadialField& w, const PlainRadialField& g,
                                 Diagnostics* diag = nullptr);

// Convolution against a fixed w acting on reduced densities P = r^2 g.
// The kernel is symmetric under the Simpson inner product, which the
// solver's energy bookkeeping relies on.
class DensityConvolver {
public:
    explicit DensityConvolver(const PlainRadialField& w, Diagnostics* diag = nullptr);
    // V(r_j) = (w * g)(r_j), g = P / r^2
    std::vector<double> apply(const std::vector<double>& P) const;
    std::vector<cplx> apply(const std::vector<cplx>& P) const;
    const RadialGrid& grid() const { return grid_; }

private:
    RadialGrid grid_;
    Eigen::MatrixXd L_;
};

// kappa = 4 pi f(0) does not depend on alpha; alpha only enters the domain link
DecomposedState decompose(const ReducedField& psi, double lambda);
ReducedField recompose(const DecomposedState& s);
// phi(0) of the regular part
cplx regular_value_at_origin(const ReducedField& phi);

struct DomainResidual {
    double residual = 0;
    cplx kappa = 0;
    cplx phi0 = 0;
};
// Robin charge link, residual |phi(0) - (alpha + sqrt(lambda)/4pi) kappa|
DomainResidual in_operator_domain(const ReducedField& psi, double lambda, const PointInteraction& op);

// fraction of 3D mass in r > frac * r_max
double spatial_tail_mass(const ReducedField& psi, double frac = 0.9);

} // namespace sh

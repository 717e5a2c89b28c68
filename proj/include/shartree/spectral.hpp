#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "shartree/point_interaction.hpp"
#include "shartree/radial.hpp"

namespace sh {

// Eigenbasis of -d^2/dr^2 on [0, r_max] with f'(0) = 4 pi alpha f(0) and f(r_max) = 0.
// Exact box modes sin(k r + delta(k)) are sampled and orthonormalized under the
// Simpson inner product in order of increasing k, so the transform is exactly
// unitary on the grid and the low modes stay essentially analytic.
class RobinTransform {
public:
    RobinTransform(const RadialGrid& grid, const PointInteraction& op, double k_max = 0,
                   double completeness_tol = 1e-8);

    const RadialGrid& grid() const { return grid_; }
    const PointInteraction& op() const { return op_; }
    int modes() const { return static_cast<int>(ev_.size()); }
    bool has_bound_state() const { return bound_; }
    double k_max() const { return k_.empty() ? 0.0 : k_.back(); }

    // continuum momenta and Parseval weights (bound channel excluded)
    const std::vector<double>& k_nodes() const { return k_; }
    const std::vector<double>& k_weights() const { return kw_; }
    // eigenvalue of mode m; the bound state, if any, is mode 0
    const std::vector<double>& eigenvalues() const { return ev_; }
    double phase(double k) const;
    double completeness_defect() const { return defect_; }
    // E[j, m] ~ sqrt(2/pi) sin(k_m r_j + delta_m) on the grid nodes
    Eigen::MatrixXd eigen_matrix() const;

    // orthonormal coefficients c_m = <q_m, f>
    std::vector<cplx> coefficients(const ReducedField& f) const;
    ReducedField synthesize(const std::vector<cplx>& c) const;
    double weight(int m) const { return W_[m]; }

private:
    RadialGrid grid_;
    PointInteraction op_;
    bool bound_ = false;
    int j0_ = 0, nodes_ = 0;
    std::vector<double> k_, kw_, ev_, W_, d_;
    Eigen::MatrixXd Q_, QtD_;
    double defect_ = 0;
};

using TransformPtr = std::shared_ptr<const RobinTransform>;
TransformPtr build_transform(const RadialGrid& grid, const PointInteraction& op, double k_max = 0);

struct SpectralField {
    TransformPtr transform;
    // u^(k_m) = c_m / sqrt(W_m); bound channel carries its orthonormal coefficient
    std::vector<cplx> coeffs;
    double tail_mass = 0;
};

SpectralField forward(const ReducedField& psi, const TransformPtr& t, Diagnostics* diag = nullptr);
ReducedField inverse(const SpectralField& F);
double parseval_sum(const SpectralField& F);

// multiply orthonormal coefficients by m(eigenvalue)
ReducedField apply_multiplier(const ReducedField& psi, const RobinTransform& t,
                              const std::function<cplx(double)>& m);

ReducedField fractional_apply(const ReducedField& psi, const RobinTransform& t, double s, bool shifted,
                              double lambda = 0);
// half-line convention: (sum W (1+k^2)^s |u^|^2)^{1/2}; multiply by sqrt(4 pi) for the 3D norm
double perturbed_norm(const ReducedField& psi, const RobinTransform& t, double s);
double perturbed_norm_from_coefficients(const std::vector<cplx>& c, const RobinTransform& t, double s);
// 3D quadratic form (-Delta_alpha)[psi] from the spectral side
double spectral_form(const std::vector<cplx>& c, const RobinTransform& t);
// fraction of spectral mass with k > frac * k_max
double spectral_tail_mass(const std::vector<cplx>& c, const RobinTransform& t, double frac = 0.9);

struct EquivalenceBand {
    double ratio_min = 0, ratio_max = 0;
    std::vector<double> ratios;
};
EquivalenceBand norm_equivalence_report(const std::vector<DecomposedState>& samples, const RobinTransform& t,
                                        double s, const RobinTransform* friedrichs = nullptr);

struct GreenCheck {
    double c_fit = 0;
    double r_at_max = 0;
};
GreenCheck fractional_green_check(const RobinTransform& t, double lambda, double s, double r_fit_max = 0);

void reject_transition(double s);

} // namespace sh

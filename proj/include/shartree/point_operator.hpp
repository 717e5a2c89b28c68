#pragma once

#include <optional>
#include <vector>

#include "shartree/point_interaction.hpp"
#include "shartree/radial.hpp"

namespace sh {

struct SpectrumSummary {
    double essential_lower = 0; // essential spectrum is [0, inf)
    std::optional<double> eigenvalue;
    std::optional<ReducedField> eigenfunction;
};

double quadratic_form(const DecomposedState& state, const PointInteraction& op);

// reduced-form second derivative, fourth order, one-sided rows at both ends
std::vector<cplx> second_derivative(const std::vector<cplx>& f, double h);
// f'(r_j), fourth order
std::vector<cplx> first_derivative(const std::vector<cplx>& f, double h);

ReducedField apply_operator(const ReducedField& psi, const PointInteraction& op, double lambda = 1.0,
                            double tol = -1);

struct BethePeierlsFit {
    double residual = 0; // rms misfit over the window, relative to |c|
    cplx c = 0;
    double inv_a = 0; // 1/a; a = -1/(4 pi alpha) in the domain
    bool degenerate = false;
    double a() const { return 1.0 / inv_a; }
};
BethePeierlsFit bethe_peierls_residual(const ReducedField& psi, const PointInteraction& op, int window = 10);

struct TmsFit {
    double slope = 0;     // d
    double intercept = 0; // e, fitted I(R) ~ d R + e + O(1/R)
    double ratio = 0;     // e / d
    double target = 0;    // 2 pi^2 alpha
    double deviation = 0; // |ratio - target| / |target| (absolute when target = 0)
    bool vacuous = false;
    std::vector<double> R, I;
};
// radial Fourier transform psi^(p), unitary 3D convention
cplx radial_fourier(const ReducedField& psi, double p);
TmsFit tms_residual(const ReducedField& psi, const PointInteraction& op, const std::vector<double>& R_list,
                    Diagnostics* diag = nullptr);

SpectrumSummary spectrum(const PointInteraction& op, const RadialGrid* grid = nullptr);

// psi = phi + [phi(0)/(alpha + sqrt(lambda)/4pi)] G_lambda for a regular reduced phi;
// phi(0) is extrapolated from the samples unless given
ReducedField domain_element(const ReducedField& phi, const PointInteraction& op, double lambda = 1.0,
                            std::optional<cplx> phi0 = std::nullopt);

} // namespace sh

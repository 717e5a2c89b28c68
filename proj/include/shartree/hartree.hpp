#pragma once

#include <string>
#include <vector>

#include "shartree/point_operator.hpp"
#include "shartree/spectral.hpp"

namespace sh {

struct ConservedQuantities {
    double mass = 0;
    double energy = 0;
    double timestamp = 0;
};

// w * |u|^2, evaluated from the reduced density |f|^2 so that singular u is fine
PlainRadialField hartree_potential(const Potential& w, const ReducedField& u, Diagnostics* diag = nullptr);
PlainRadialField hartree_potential(const DensityConvolver& conv, const ReducedField& u);
std::vector<double> reduced_density(const ReducedField& u);
// 1/4 int (w*|u|^2)|u|^2 d^3x with the Simpson weights of the convolution kernel
double hartree_energy(const std::vector<double>& V, const ReducedField& u);

ConservedQuantities conserved(const ReducedField& u, const Potential& w, const PointInteraction& op,
                              double lambda = 1.0, double timestamp = 0);

struct WspNorm {
    double value = 0;
    bool converged = true; // false: value still moving when the momentum cutoff doubles
    double half_cutoff_value = 0;
};
WspNorm sobolev_wsp_norm(const Potential& w, double s, double p, Diagnostics* diag = nullptr);

struct TheoremVerdict {
    std::string theorem;
    std::string required;
    double value = 0;   // witnessing norm
    double gamma = -1;  // Lorentz index used, if any
    double p = 0;       // Sobolev integrability used, if any
    std::string s_range;
    bool potential_ok = false;
    bool regularity_ok = false;
    bool pass = false;
    std::string note;
};

struct HypothesisReport {
    double s = 0;
    double singular_exponent = 0;
    bool nonnegative = false;
    std::vector<TheoremVerdict> verdicts;
    const TheoremVerdict& at(const std::string& theorem) const;
};

double estimate_singular_exponent(const Potential& w);
HypothesisReport hypothesis_check(const Potential& w, double s);
void cache_norms(Potential& w, const HypothesisReport& rep);

struct TrilinearFit {
    double constant = 0;
    double w_norm = 0;
    std::vector<double> ratios;
};
TrilinearFit trilinear_check(const Potential& w, const std::vector<ReducedField>& ensemble, const RobinTransform& t,
                             double s, double p);

} // namespace sh

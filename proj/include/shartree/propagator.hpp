#pragma once

#include <vector>

#include "shartree/spectral.hpp"

namespace sh {

struct Trajectory;

struct AdmissiblePair {
    double r = 2;
    double q = 0; // +inf at r = 2
};

ReducedField evolve_linear(const ReducedField& psi, const RobinTransform& t, double time,
                           Diagnostics* diag = nullptr);
// coefficient-space version, c_m -> exp(-i E_m time) c_m
std::vector<cplx> evolve_coefficients(const std::vector<cplx>& c, const RobinTransform& t, double time);

AdmissiblePair admissible_pair(double r);
double decay_target(double r);

struct DecayReport {
    double r = 2;
    std::vector<double> times, norms;
    double slope = 0, target = 0;
    bool pass = false;
};
DecayReport dispersive_decay_experiment(const ReducedField& psi0, const RobinTransform& t, double r,
                                        const std::vector<double>& times, double tail_limit = 0.01);

// (int ||u(t)||_r^q dt)^{1/q} over the trajectory samples; q = inf gives the sup
double strichartz_norm(const Trajectory& traj, double q, double r);
double strichartz_norm(const std::vector<double>& times, const std::vector<ReducedField>& states, double q, double r);

std::vector<double> log_spaced(double t0, double t1, int count);

} // namespace sh

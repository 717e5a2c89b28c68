#pragma once

#include <string>
#include <vector>

#include "shartree/hartree.hpp"
#include "shartree/propagator.hpp"

namespace sh {

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double picard_tol = 1e-6;
    int picard_max_iter = 50;
    double blowup_threshold = 0; // 0: 1e3 x initial monitored norm
    double monitor_s = 1.0;
    double monitor_r = 2.5;
    int quadrature_nodes_per_window = 0; // 0: window / dt
    int state_every = 0;                 // 0: keep about 200 states
    double tail_limit = 0.01;
    double lambda = 1.0;
    double k_max = 0;
};

enum class Termination { completed, blowup_flag, aliasing_abort };
std::string to_string(Termination t);

struct MonitorRecord {
    double t = 0;
    double mass = 0;
    double energy = 0;
    double h_s_norm = 0;
    double l2_norm = 0;
    double lr_norm = 0;
    double tail_mass = 0;
    double half_form = 0; // 1/2 (-Delta_alpha)[u], for the globalization inequality
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ReducedField> states;
    std::vector<MonitorRecord> monitors;
    Termination termination = Termination::completed;
    double blowup_threshold = 0;
};

// one Strang step; V carries w*|u|^2 of the current state in and of the new state out
class StrangStepper {
public:
    StrangStepper(const Potential& w, TransformPtr t);
    ReducedField step(const ReducedField& u, double dt, std::vector<double>& V) const;
    std::vector<double> potential(const ReducedField& u) const;
    const RobinTransform& transform() const { return *t_; }
    bool linear() const { return !conv_; }

private:
    TransformPtr t_;
    std::shared_ptr<const DensityConvolver> conv_;
};

ReducedField strang_step(const ReducedField& u, const Potential& w, const RobinTransform& t, double dt);

MonitorRecord monitor(const ReducedField& u, const std::vector<double>& V, const RobinTransform& t,
                      const SolverConfig& cfg, double time);

Trajectory evolve(const ReducedField& f, const Potential& w, const TransformPtr& t, const SolverConfig& cfg);
Trajectory evolve(const ReducedField& f, const Potential& w, const PointInteraction& op, const SolverConfig& cfg);

struct PicardResult {
    Trajectory trajectory;
    std::vector<double> differences; // sup_t ||u^(m+1) - u^(m)||_2
    std::vector<double> ratios;
    int iterations = 0;
};
PicardResult picard_window(const ReducedField& f, const Potential& w, const TransformPtr& t, double T,
                           const SolverConfig& cfg);
// contraction window T = 1 / (4 M ||w||_inf), M the mass
double contraction_window(const ReducedField& f, const Potential& w);

enum class Perturb { datum, potential, both };
struct StabilityRow {
    double eps = 0;
    double err_l2 = 0;
    double err_hs = 0;
    double ratio = 0; // err_l2 / eps
};
struct StabilityTable {
    Perturb mode = Perturb::both;
    std::vector<StabilityRow> rows;
    double spread = 0; // max ratio / min ratio over eps > 0
};
StabilityTable stability_experiment(const ReducedField& f, const Potential& w, const TransformPtr& t,
                                    const std::vector<double>& scales, const ReducedField& g, const Potential& v,
                                    Perturb mode, const SolverConfig& cfg);

struct GlobalizationReport {
    double max_violation = 0; // max over samples of 1/2 form - energy
    double sup_h1 = 0;        // half-line H^1_alpha norm, sup over t
    double initial_h1 = 0;
    double bound = 0;         // sqrt((M + 2E)/(4 pi)) from t = 0
    double bound_ratio = 0;   // sup_h1 / bound
    bool inequality_holds = false;
    bool bounded = false;
    std::vector<double> tested_masses;
    double largest_bounded_mass = 0;
    Termination termination = Termination::completed;
};
GlobalizationReport globalization_check(const ReducedField& f, const Potential& w, const TransformPtr& t,
                                        double long_horizon, const SolverConfig& cfg, int mass_sweep = 0);

struct FreeLimitRow {
    std::string alpha;
    double deviation = 0;
};
struct FreeLimitTable {
    std::vector<FreeLimitRow> rows;
    bool decreasing = false;
};
FreeLimitTable free_limit_check(const ReducedField& f, const Potential& w, const std::vector<double>& alphas, double T,
                                const SolverConfig& cfg);

double l2_distance(const ReducedField& a, const ReducedField& b);

} // namespace sh

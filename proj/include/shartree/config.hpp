#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shartree/solver.hpp"

namespace sh {

struct ParseError : Error {
    int line = 0;
    ParseError(int ln, const std::string& msg) : Error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

// gaussian(width, amplitude) | green(lambda) | ball_indicator(radius) | inverse_power(gamma, cutoff) | file(path) | zero
struct FieldSpec {
    std::string kind = "gaussian";
    std::vector<double> args;
    std::string path;

    double arg(std::size_t i, double fallback) const { return i < args.size() ? args[i] : fallback; }
    std::string str() const;
};
FieldSpec parse_field_spec(const std::string& text);

struct RunConfig {
    std::string command;
    double r_max = 30;
    int n = 300;
    double k_max = 0;
    int n_k = 0; // 0: one mode per interior node

    PointInteraction op = PointInteraction(0.5);
    double lambda = 1.0;
    double s = 1.0;
    double r = 2.5;
    FieldSpec potential{"gaussian", {1.0, 1.0}, ""};
    FieldSpec datum{"gaussian", {1.0, 1.0}, ""};
    FieldSpec perturb_datum{"gaussian", {1.5, 1.0}, ""};
    FieldSpec perturb_potential{"gaussian", {0.7, 1.0}, ""};

    SolverConfig solver;
    double window = 0; // picard window, 0: 1 / (4 M ||w||_inf)
    std::uint64_t seed = 20240601;
    std::vector<double> scales{1e-2, 1e-3, 1e-4};
    std::vector<double> alphas{1, 10, 100};
    std::string perturb = "datum";
    double long_horizon = 20;
    int mass_sweep = 0;
    int decay_samples = 10;
    double t_min = 0, t_max = 0; // dispersive sweep, 0: from the datum width

    std::string out_dir = ".";
    std::string prefix = "sh";
    bool svg = false;
};

RunConfig parse_config(const std::string& text);
// one `key = value` assignment; line is only used for messages
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);
void validate(const RunConfig& cfg);

RadialGrid make_grid(const RunConfig& cfg);
// datum as a reduced profile f = r psi
ReducedField make_datum(const FieldSpec& spec, const RadialGrid& g);
Potential make_potential(const FieldSpec& spec, const RadialGrid& g);

// CSV field files: header "r,re,im", optional "# seed=..." comment lines
std::vector<std::pair<double, cplx>> read_field_csv(const std::string& path);

} // namespace sh

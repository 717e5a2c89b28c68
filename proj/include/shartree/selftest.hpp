#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shartree/report.hpp"

namespace sh {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;
    json detail;
};

struct SelftestReport {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> results;
    int passed() const;
    json to_json() const;
};

// criteria 1..11; out_dir receives selftest.json plus CSV/SVG artifacts (empty: no files)
SelftestReport run_selftest(std::uint64_t seed, const std::string& out_dir,
                            const std::function<void(const CriterionResult&)>& on_result = {});

// individual suites, exposed for the tests
CriterionResult check_closed_forms();
CriterionResult check_convolution(std::uint64_t seed);
CriterionResult check_transform(std::uint64_t seed);
CriterionResult check_boundary_conditions();
CriterionResult check_dispersive_decay(const std::string& out_dir = "");
CriterionResult check_green_contrast();
CriterionResult check_conservation(const std::string& out_dir = "");
CriterionResult check_picard_strang();
CriterionResult check_stability(std::uint64_t seed);
CriterionResult check_globalization(const std::string& out_dir = "");
CriterionResult check_free_limit();

// (w * g)(r) by nested Gauss quadrature in 3D spherical coordinates, for analytic radial w, g
double brute_force_convolution(const std::function<double(double)>& w, const std::function<double(double)>& g, double r,
                               double rho_max);

} // namespace sh

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace deco::validation {

struct CheckResult {
  std::string name;
  double max_error = 0.0;  // in the units of `tolerance`
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 20240917;
  std::size_t samples = 1'000'000;
  double perturb_k = 0.0;
};

using Checks = std::vector<CheckResult>;

// One group per criterion; each compares a closed form against an
// independent oracle or an exact identity.
Checks check_closed_vs_quadrature(const SuiteOptions& opts);
Checks check_closed_vs_montecarlo(const SuiteOptions& opts);
Checks check_polynomial_exactness(const SuiteOptions& opts);
Checks check_series_expansion(const SuiteOptions& opts);
Checks check_large_velocity_asymptote(const SuiteOptions& opts);
Checks check_gr_identity(const SuiteOptions& opts);
Checks check_decoherence_function(const SuiteOptions& opts);
Checks check_density_matrix_evolution(const SuiteOptions& opts);
Checks check_visibility_scan(const SuiteOptions& opts);

Checks run_all(const SuiteOptions& opts);

// Reference setup shared by the checks: argon at 300 K, a C70 beam at
// 100 m/s, and an illustrative C6 coefficient.
struct ReferenceScenario {
  double temperature = 300.0;
  double gas_mass_amu = 39.948;
  double test_mass_amu = 840.77;
  double v0 = 100.0;
  double c6 = 2.9e-76;
  double pressure = 1e-4;  // Pa (1e-6 mbar)
  double flight_time = 2.5e-3;
};

}  // namespace deco::validation

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "decokit/errors.hpp"

namespace deco::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitBadConfig = 2,
  kExitNumerical = 3,
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Parsed run configuration, converted to SI. See README for the JSON
/// schema; units apply only to pressures (mbar | Pa) and masses (amu | kg).
struct RunConfig {
  std::string gas_species;
  double temperature = 0.0;  // K
  double gas_mass = 0.0;     // kg
  double test_mass = 0.0;    // kg
  double v0 = 0.0;           // m/s
  std::vector<double> v0_values;

  // Exactly one of the two is set.
  std::optional<double> c6;  // J m^6
  std::optional<std::pair<double, double>> k_alpha;

  // visibility
  std::optional<double> flight_time;
  double reference_visibility = 1.0;
  std::optional<double> pressure_min;  // Pa
  std::optional<double> pressure_max;  // Pa
  int points = 20;

  // decoherence-function
  std::optional<double> pressure;  // Pa
  std::optional<double> q_width;   // kg m/s
  int q_points = 4096;
  std::optional<double> delta_max;  // m
  int delta_points = 101;

  std::string output_path;
};

/// Throws ConfigError on schema violations, unknown keys, unsupported
/// units or non-positive physical inputs.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// CSV writers. Each begins with "# decoherence-kit v<version> schema=<n>".
void cmd_xsection(const RunConfig& cfg, std::ostream& out);
void cmd_visibility(const RunConfig& cfg, std::ostream& out);
void cmd_decoherence_function(const RunConfig& cfg, std::ostream& out);

struct ValidateOptions {
  std::uint64_t seed = 20240917;
  std::size_t samples = 1'000'000;
  // Relative perturbation applied to K on the closed-form side only.
  double perturb_k = 0.0;
};

/// Runs the oracle cross-check suite and prints one line per check.
/// Returns kExitOk when every check passes, kExitValidationFailed otherwise.
int cmd_validate(const ValidateOptions& opts, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "%.17g"
std::string format_number(double v);

}  // namespace deco::cli

#include "decokit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "decokit/decoherence.hpp"
#include "decokit/gas.hpp"
#include "decokit/validation.hpp"
#include "decokit/xsection.hpp"

namespace deco::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "schema_version", "gas_species",  "pressure_unit", "mass_unit",    "temperature",
    "gas_mass",       "test_mass",    "v0",            "v0_values",    "c6",
    "K",              "alpha",        "flight_time",   "reference_visibility",
    "pressure_min",   "pressure_max", "points",        "pressure",     "q_width",
    "q_points",       "delta_max",    "delta_points",  "output_path"};

double get_number(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("config: '" + key + "' must be finite");
  return d;
}

double get_positive(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("config: missing required key '" + key + "'");
  const double d = get_number(j, key);
  if (!(d > 0.0)) throw ConfigError("config: '" + key + "' must be positive");
  return d;
}

std::optional<double> get_optional_positive(const json& j, const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  return get_positive(j, key);
}

int get_int(const json& j, const std::string& key, int fallback, int minimum) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
  const int n = v.get<int>();
  if (n < minimum) {
    throw ConfigError("config: '" + key + "' must be at least " + std::to_string(minimum));
  }
  return n;
}

template <typename T>
const T& require(const std::optional<T>& v, const char* key, const char* command) {
  if (!v) throw ConfigError(std::string("config: '") + key + "' is required by " + command);
  return *v;
}

void write_banner(std::ostream& out, const std::string& command, const RunConfig& cfg) {
  out << "# decoherence-kit v" << kVersion << " schema=" << kSchemaVersion << "\n";
  out << "# command=" << command;
  if (!cfg.gas_species.empty()) out << " species=" << cfg.gas_species;
  out << "\n";
}

PowerLawCrossSection cross_section_of(const RunConfig& cfg) {
  if (cfg.c6) return k_from_c6(*cfg.c6);
  return {cfg.k_alpha->first, cfg.k_alpha->second};
}

GasState gas_of(const RunConfig& cfg, double number_density = 0.0) {
  return GasState(cfg.temperature, cfg.gas_mass, number_density);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& item : j.items()) {
    if (!kKnownKeys.contains(item.key())) throw ConfigError("config: unknown key '" + item.key() + "'");
  }
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion) {
    throw ConfigError("config: schema_version must be " + std::to_string(kSchemaVersion));
  }

  const std::string pressure_unit = j.value("pressure_unit", std::string("mbar"));
  const std::string mass_unit = j.value("mass_unit", std::string("amu"));
  double pressure_scale = 0.0;
  if (pressure_unit == "mbar") {
    pressure_scale = kMillibarInPascal;
  } else if (pressure_unit == "Pa") {
    pressure_scale = 1.0;
  } else {
    throw ConfigError("config: pressure_unit must be 'mbar' or 'Pa'");
  }
  double mass_scale = 0.0;
  if (mass_unit == "amu") {
    mass_scale = PhysicalConstants::atomic_mass_unit;
  } else if (mass_unit == "kg") {
    mass_scale = 1.0;
  } else {
    throw ConfigError("config: mass_unit must be 'amu' or 'kg'");
  }

  RunConfig cfg;
  if (j.contains("gas_species")) {
    if (!j["gas_species"].is_string()) throw ConfigError("config: 'gas_species' must be a string");
    cfg.gas_species = j["gas_species"].get<std::string>();
  }
  cfg.temperature = get_positive(j, "temperature");
  cfg.gas_mass = get_positive(j, "gas_mass") * mass_scale;
  cfg.test_mass = get_positive(j, "test_mass") * mass_scale;
  cfg.v0 = get_positive(j, "v0");
  if (j.contains("v0_values")) {
    if (!j["v0_values"].is_array() || j["v0_values"].empty()) {
      throw ConfigError("config: 'v0_values' must be a non-empty array");
    }
    for (const auto& v : j["v0_values"]) {
      if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>())) {
        throw ConfigError("config: 'v0_values' entries must be positive numbers");
      }
      cfg.v0_values.push_back(v.get<double>());
    }
  }

  const bool has_c6 = j.contains("c6");
  const bool has_k = j.contains("K");
  const bool has_alpha = j.contains("alpha");
  if (has_k != has_alpha) throw ConfigError("config: 'K' and 'alpha' must be given together");
  if (has_c6 == has_k) throw ConfigError("config: give exactly one of 'c6' or ('K', 'alpha')");
  if (has_c6) {
    cfg.c6 = get_positive(j, "c6");
  } else {
    const double k = get_positive(j, "K");
    const double alpha = get_number(j, "alpha");
    if (!(alpha > -4.0)) throw ConfigError("config: 'alpha' must exceed -4");
    cfg.k_alpha = std::make_pair(k, alpha);
  }

  cfg.flight_time = get_optional_positive(j, "flight_time");
  if (j.contains("reference_visibility")) {
    cfg.reference_visibility = get_positive(j, "reference_visibility");
    if (cfg.reference_visibility > 1.0) {
      throw ConfigError("config: 'reference_visibility' must lie in (0, 1]");
    }
  }
  if (auto p = get_optional_positive(j, "pressure_min")) cfg.pressure_min = *p * pressure_scale;
  if (auto p = get_optional_positive(j, "pressure_max")) cfg.pressure_max = *p * pressure_scale;
  if (cfg.pressure_min && cfg.pressure_max && !(*cfg.pressure_min < *cfg.pressure_max)) {
    throw ConfigError("config: 'pressure_min' must be below 'pressure_max'");
  }
  cfg.points = get_int(j, "points", cfg.points, 2);
  if (auto p = get_optional_positive(j, "pressure")) cfg.pressure = *p * pressure_scale;

  cfg.q_width = get_optional_positive(j, "q_width");
  cfg.q_points = get_int(j, "q_points", cfg.q_points, 64);
  cfg.delta_max = get_optional_positive(j, "delta_max");
  cfg.delta_points = get_int(j, "delta_points", cfg.delta_points, 2);

  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) throw ConfigError("config: 'output_path' must be a string");
    cfg.output_path = j["output_path"].get<std::string>();
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

void cmd_xsection(const RunConfig& cfg, std::ostream& out) {
  const PowerLawCrossSection pl = cross_section_of(cfg);
  const double vmp = most_probable_speed(gas_of(cfg));
  const std::vector<double> speeds = cfg.v0_values.empty() ? std::vector<double>{cfg.v0} : cfg.v0_values;

  write_banner(out, "xsection", cfg);
  out << "# K=" << format_number(pl.prefactor_k()) << " alpha=" << format_number(pl.exponent_alpha())
      << " v_mp=" << format_number(vmp);
  if (pl.singular_endpoint()) out << " singular_endpoint=true";
  out << "\n";
  out << "v0,x,sigma_exact,sigma_series1,sigma_quadrature\n";
  for (double v0 : speeds) {
    const double exact = sigma_macro_exact(pl, v0, vmp);
    const double series = sigma_macro_series(pl, v0, vmp, 1);
    const double quad = sigma_macro_quadrature(pl, v0, vmp, 1e-16 * exact, 1e-12);
    out << format_number(v0) << ',' << format_number(v0 / vmp) << ',' << format_number(exact) << ','
        << format_number(series) << ',' << format_number(quad) << '\n';
  }
}

void cmd_visibility(const RunConfig& cfg, std::ostream& out) {
  ScanConfig scan_cfg{gas_of(cfg),
                      BeamState(cfg.test_mass, cfg.v0),
                      cross_section_of(cfg),
                      require(cfg.flight_time, "flight_time", "visibility"),
                      cfg.reference_visibility,
                      require(cfg.pressure_min, "pressure_min", "visibility"),
                      require(cfg.pressure_max, "pressure_max", "visibility"),
                      cfg.points};
  const ScanResult scan = visibility_pressure_scan(scan_cfg);

  write_banner(out, "visibility", cfg);
  out << "# sigma_macro=" << format_number(scan.sigma_macro)
      << " flight_time=" << format_number(scan_cfg.flight_time)
      << " V0=" << format_number(scan_cfg.reference_visibility) << "\n";
  out << "pressure_Pa,n,Gamma,V\n";
  for (const auto& r : scan.rows) {
    out << format_number(r.pressure) << ',' << format_number(r.number_density) << ','
        << format_number(r.rate) << ',' << format_number(r.visibility) << '\n';
  }
  out << "# p_half_Pa=" << format_number(scan.pressure_half) << "\n";
}

void cmd_decoherence_function(const RunConfig& cfg, std::ostream& out) {
  const double pressure = require(cfg.pressure, "pressure", "decoherence-function");
  const double width = require(cfg.q_width, "q_width", "decoherence-function");
  const GasState gas = gas_of(cfg, density_from_pressure(pressure, cfg.temperature));
  const BeamState beam(cfg.test_mass, cfg.v0);
  const double sigma = sigma_macro_exact(cross_section_of(cfg), cfg.v0, most_probable_speed(gas));
  const double rate = decoherence_rate(gas, beam, sigma);
  const MomentumKernel kernel = kernel_gaussian(rate, width, cfg.q_points);
  const double delta_max = cfg.delta_max.value_or(1e3 * PhysicalConstants::reduced_planck / width);

  write_banner(out, "decoherence-function", cfg);
  out << "# Gamma=" << format_number(rate) << " q_width=" << format_number(width)
      << " q_points=" << cfg.q_points << "\n";
  out << "delta_x,F,F_over_Gamma\n";
  for (int i = 0; i < cfg.delta_points; ++i) {
    const double delta = i == cfg.delta_points - 1 ? delta_max : delta_max * i / (cfg.delta_points - 1);
    const double f = decoherence_function(kernel, delta);
    out << format_number(delta) << ',' << format_number(f) << ',' << format_number(f / rate) << '\n';
  }
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out) {
  validation::SuiteOptions suite;
  suite.seed = opts.seed;
  suite.samples = opts.samples;
  suite.perturb_k = opts.perturb_k;
  const auto checks = validation::run_all(suite);

  out << "decoherence-kit v" << kVersion << " validate seed=" << opts.seed
      << " samples=" << opts.samples << " perturb_k=" << format_number(opts.perturb_k) << "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %-38s max_err=%.3e tol=%.1e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.max_error, c.tolerance);
    out << line;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
    if (c.passed) ++passed;
  }
  out << passed << "/" << checks.size() << " checks passed\n";
  return passed == checks.size() ? kExitOk : kExitValidationFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collisional decoherence observables for matter-wave interferometry", "decokit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  ValidateOptions vopts;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "CSV output path (default: config output_path or stdout)");
  };
  CLI::App* xsection = app.add_subcommand("xsection", "sigma_macro sweep over v0");
  add_io(xsection);
  CLI::App* vis = app.add_subcommand("visibility", "visibility versus background pressure");
  add_io(vis);
  CLI::App* dfun = app.add_subcommand("decoherence-function", "F(delta_x) for a Gaussian kernel");
  add_io(dfun);
  CLI::App* validate = app.add_subcommand("validate", "run the oracle cross-check suite");
  validate->add_option("--seed", vopts.seed, "Monte Carlo seed");
  validate->add_option("--samples", vopts.samples, "Monte Carlo samples per point")
      ->check(CLI::Range(std::size_t{1000}, std::size_t{1'000'000'000}));
  validate->add_option("--perturb-k", vopts.perturb_k, "relative perturbation of K (debug)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (validate->parsed()) return cmd_validate(vopts, out);

    const RunConfig cfg = load_run_config(config_path);
    std::ostringstream csv;
    if (xsection->parsed()) {
      cmd_xsection(cfg, csv);
    } else if (vis->parsed()) {
      cmd_visibility(cfg, csv);
    } else {
      cmd_decoherence_function(cfg, csv);
    }
    const std::string target = out_path.empty() ? cfg.output_path : out_path;
    if (target.empty()) {
      out << csv.str();
    } else {
      std::ofstream file(target, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file '" + target + "'");
      file << csv.str();
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace deco::cli

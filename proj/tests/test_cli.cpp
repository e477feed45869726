#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "decokit/cli.hpp"
#include "decokit/decoherence.hpp"
#include "doctest.h"

using namespace deco;
using namespace deco::cli;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"schema_version", 1},  {"gas_species", "Ar"}, {"temperature", 300.0},
              {"gas_mass", 39.948},   {"test_mass", 840.77}, {"v0", 100.0},
              {"c6", 2.9e-76},        {"flight_time", 2.5e-3}, {"reference_visibility", 0.8},
              {"pressure_min", 1e-8}, {"pressure_max", 1e-4}, {"points", 41},
              {"pressure", 1e-6},     {"q_width", 2.344e-23}};
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.starts_with("#")) {
      csv.comments.push_back(line);
    } else if (csv.header.empty()) {
      csv.header = split(line);
    } else {
      std::vector<double> row;
      for (const auto& c : split(line)) row.push_back(std::stod(c));
      csv.rows.push_back(row);
    }
  }
  return csv;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string run(void (*cmd)(const RunConfig&, std::ostream&), const json& j) {
  std::ostringstream os;
  cmd(parse_run_config(j), os);
  return os.str();
}

int run_args(std::vector<const char*> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "decokit");
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(args.size()), args.data(), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "decokit_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("parse_run_config converts units") {
  const RunConfig cfg = parse_run_config(base_config());
  CHECK(cfg.gas_species == "Ar");
  CHECK(cfg.gas_mass == doctest::Approx(39.948 * PhysicalConstants::atomic_mass_unit).epsilon(1e-15));
  CHECK(*cfg.pressure_min == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(*cfg.pressure == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(cfg.c6.has_value());
  CHECK_FALSE(cfg.k_alpha.has_value());

  json j = base_config();
  j["pressure_unit"] = "Pa";
  j["mass_unit"] = "kg";
  j["gas_mass"] = 6.6e-26;
  const RunConfig si = parse_run_config(j);
  CHECK(*si.pressure_min == 1e-8);
  CHECK(si.gas_mass == 6.6e-26);
}

TEST_CASE("parse_run_config rejects bad input") {
  auto rejects = [](json j) { CHECK_THROWS_AS(parse_run_config(j), ConfigError); };
  json j = base_config();
  j.erase("temperature");
  rejects(j);
  j = base_config();
  j["K"] = 1e-16;
  j["alpha"] = -0.4;
  rejects(j);  // both c6 and (K, alpha)
  j.erase("c6");
  CHECK_NOTHROW(parse_run_config(j));
  j.erase("alpha");
  rejects(j);
  j = base_config();
  j["colour"] = "blue";
  rejects(j);
  j = base_config();
  j["schema_version"] = 2;
  rejects(j);
  j = base_config();
  j["pressure_unit"] = "torr";
  rejects(j);
  j = base_config();
  j["temperature"] = -3.0;
  rejects(j);
  j = base_config();
  j["pressure_min"] = 1e-3;
  rejects(j);
  j = base_config();
  j["reference_visibility"] = 1.5;
  rejects(j);
  j = base_config();
  j["points"] = 2.5;
  rejects(j);
  rejects(json::array());
}

TEST_CASE("xsection command") {
  json j = base_config();
  j.erase("c6");
  j["K"] = 3e-16;
  j["alpha"] = 1.0;
  j["v0_values"] = {10.0, 100.0, 400.0, 2000.0};
  const std::string text = run(cmd_xsection, j);
  CHECK(text.starts_with("# decoherence-kit v0.1.0 schema=1\n"));
  const Csv csv = parse_csv(text);
  CHECK(csv.header == std::vector<std::string>{"v0", "x", "sigma_exact", "sigma_series1", "sigma_quadrature"});
  REQUIRE(csv.rows.size() == 4);

  const RunConfig cfg = parse_run_config(j);
  const double vmp = most_probable_speed(GasState(cfg.temperature, cfg.gas_mass));
  for (const auto& r : csv.rows) {
    CHECK(rel(r[1], r[0] / vmp) < 1e-15);
    CHECK(rel(r[2] * r[0], 3e-16 * (r[0] * r[0] + 1.5 * vmp * vmp)) < 1e-12);
    CHECK(rel(r[4], r[2]) < 1e-9);
  }

  json slow = base_config();
  slow["v0_values"] = {1e-3 * 353.3826288635243};
  const Csv s = parse_csv(run(cmd_xsection, slow));
  CHECK(std::abs(s.rows[0][3] / s.rows[0][2] - 1.0) < 1e-6);
}

TEST_CASE("visibility command") {
  const std::string text = run(cmd_visibility, base_config());
  const Csv csv = parse_csv(text);
  CHECK(csv.header == std::vector<std::string>{"pressure_Pa", "n", "Gamma", "V"});
  REQUIRE(csv.rows.size() == 41);
  REQUIRE(csv.comments.back().starts_with("# p_half_Pa="));
  const double p_half = std::stod(csv.comments.back().substr(std::string("# p_half_Pa=").size()));

  const double slope = std::log(csv.rows[0][3] / 0.8) / csv.rows[0][0];
  bool bracketed = false;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& r = csv.rows[i];
    CHECK(std::abs(std::log(r[3] / 0.8) - slope * r[0]) <= 1e-12 * std::abs(slope * r[0]) + 1e-15);
    if (i + 1 < csv.rows.size() && r[3] >= 0.4 && csv.rows[i + 1][3] <= 0.4) {
      bracketed = r[0] <= p_half && p_half <= csv.rows[i + 1][0];
    }
  }
  CHECK(bracketed);

  // Same chain through the library.
  const RunConfig cfg = parse_run_config(base_config());
  const double n = density_from_pressure(csv.rows.back()[0], 300.0);
  const GasState gas(cfg.temperature, cfg.gas_mass, n);
  const double sigma = sigma_macro_exact(k_from_c6(2.9e-76), 100.0, most_probable_speed(gas));
  CHECK(csv.rows.back()[2] == decoherence_rate(gas, BeamState(cfg.test_mass, 100.0), sigma));

  json missing = base_config();
  missing.erase("flight_time");
  CHECK_THROWS_AS(run(cmd_visibility, missing), ConfigError);
}

TEST_CASE("decoherence-function command") {
  const Csv csv = parse_csv(run(cmd_decoherence_function, base_config()));
  CHECK(csv.header == std::vector<std::string>{"delta_x", "F", "F_over_Gamma"});
  REQUIRE(csv.rows.size() == 101);
  CHECK(csv.rows.front()[0] == 0.0);
  CHECK(csv.rows.front()[1] == 0.0);
  CHECK(csv.rows.back()[0] == doctest::Approx(1e3 * PhysicalConstants::reduced_planck / 2.344e-23));
  CHECK(csv.rows.back()[2] >= 0.999);
  CHECK(csv.rows.back()[2] <= 1.001);
  const double length = PhysicalConstants::reduced_planck / 2.344e-23;
  for (const auto& r : csv.rows) {
    const double d = r[0] / length;
    CHECK(std::abs(r[2] + std::expm1(-0.5 * d * d)) < 1e-6);
  }
}

TEST_CASE("validate command") {
  std::ostringstream first, second;
  CHECK(cmd_validate({}, first) == kExitOk);
  CHECK(cmd_validate({}, second) == kExitOk);
  CHECK(first.str() == second.str());
  CHECK(first.str().find("max_err=") != std::string::npos);
  CHECK(first.str().find("[FAIL]") == std::string::npos);

  ValidateOptions perturbed;
  perturbed.perturb_k = 1e-3;
  std::ostringstream bad;
  CHECK(cmd_validate(perturbed, bad) == kExitValidationFailed);
  CHECK(bad.str().find("[FAIL] closed_form_vs_quadrature") != std::string::npos);
}

TEST_CASE("command line entry point") {
  const std::string cfg_path = write_temp("config.json", base_config().dump());
  std::string a, b;
  CHECK(run_args({"xsection", "--config", cfg_path.c_str()}, &a) == kExitOk);
  CHECK(run_args({"xsection", "--config", cfg_path.c_str()}, &b) == kExitOk);
  CHECK(a == b);
  CHECK(a.find("sigma_quadrature") != std::string::npos);

  const std::string out_path = "decokit_test_out.csv";
  CHECK(run_args({"visibility", "--config", cfg_path.c_str(), "--out", out_path.c_str()}) == kExitOk);
  std::ifstream in(out_path);
  std::string first_line;
  std::getline(in, first_line);
  CHECK(first_line == "# decoherence-kit v0.1.0 schema=1");

  CHECK(run_args({"decoherence-function", "--config", "does_not_exist.json"}) == kExitBadConfig);
  CHECK(run_args({"frobnicate"}) == kExitBadConfig);
  CHECK(run_args({"validate", "--samples", "10"}) == kExitBadConfig);

  json bad = base_config();
  bad.erase("v0");
  const std::string bad_path = write_temp("bad.json", bad.dump());
  CHECK(run_args({"xsection", "--config", bad_path.c_str()}) == kExitBadConfig);
  CHECK(run_args({"xsection", "--config", write_temp("broken.json", "{not json").c_str()}) == kExitBadConfig);

  // Gamma(alpha/2 + 2) overflows for alpha = 400.
  json huge = base_config();
  huge.erase("c6");
  huge["K"] = 1e-16;
  huge["alpha"] = 400.0;
  const std::string huge_path = write_temp("huge.json", huge.dump());
  CHECK(run_args({"xsection", "--config", huge_path.c_str()}) == kExitNumerical);

  CHECK(run_args({"validate", "--samples", "20000", "--perturb-k", "1e-3"}) == kExitValidationFailed);
}

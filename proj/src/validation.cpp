#include "decokit/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "decokit/decoherence.hpp"
#include "decokit/quadrature.hpp"
#include "decokit/specfun.hpp"
#include "decokit/xsection.hpp"

namespace deco::validation {

namespace {

constexpr std::array<double, 5> kAlphas = {-0.4, -1.0, 0.0, 1.0, 2.0};
constexpr std::array<double, 7> kRatios = {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
constexpr double kUnitK = 1e-16;

CheckResult make(std::string name, double err, double tol, std::string detail = {}) {
  return {std::move(name), err, tol, err <= tol, std::move(detail)};
}

std::string count_detail(std::size_t n, const char* what) {
  return std::to_string(n) + " " + what;
}

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

GasState reference_gas(const ReferenceScenario& s) {
  return GasState(s.temperature, s.gas_mass_amu * PhysicalConstants::atomic_mass_unit,
                  density_from_pressure(s.pressure, s.temperature));
}

BeamState reference_beam(const ReferenceScenario& s) {
  return BeamState(s.test_mass_amu * PhysicalConstants::atomic_mass_unit, s.v0);
}

// Gamma of the reference chain: C6 -> K -> sigma_macro -> n v0 sigma.
double reference_rate(const ReferenceScenario& s) {
  const GasState gas = reference_gas(s);
  const double sigma = sigma_macro_exact(k_from_c6(s.c6), s.v0, most_probable_speed(gas));
  return decoherence_rate(gas, reference_beam(s), sigma);
}

// Thermal momentum of the gas, used as the kernel width.
double reference_q_width(const ReferenceScenario& s) {
  const GasState gas = reference_gas(s);
  return gas.particle_mass() * most_probable_speed(gas);
}

PowerLawCrossSection perturbed(const PowerLawCrossSection& pl, double eps) {
  return {pl.prefactor_k() * (1.0 + eps), pl.exponent_alpha()};
}

}  // namespace

Checks check_closed_vs_quadrature(const SuiteOptions& opts) {
  const double vmp = most_probable_speed(reference_gas({}));
  double worst = 0.0;
  for (double alpha : kAlphas) {
    const PowerLawCrossSection pl(kUnitK, alpha);
    for (double x : kRatios) {
      const double v0 = x * vmp;
      const double exact = sigma_macro_exact(perturbed(pl, opts.perturb_k), v0, vmp);
      const double quad = sigma_macro_quadrature(pl, v0, vmp, 1e-16 * exact, 1e-13);
      worst = std::max(worst, rel_err(exact, quad));
    }
  }
  return {make("closed_form_vs_quadrature", worst, 1e-8,
               count_detail(kAlphas.size() * kRatios.size(), "points"))};
}

Checks check_closed_vs_montecarlo(const SuiteOptions& opts) {
  const GasState gas = reference_gas({});
  const double vmp = most_probable_speed(gas);
  const PowerLawCrossSection pl(kUnitK, -0.4);
  double worst = 0.0;
  for (double x : {0.5, 1.0, 2.0}) {
    const double v0 = x * vmp;
    const double exact = sigma_macro_exact(perturbed(pl, opts.perturb_k), v0, vmp);
    const MonteCarloEstimate mc = sigma_macro_montecarlo(pl, v0, gas, opts.samples, opts.seed);
    worst = std::max(worst, std::abs(exact - mc.mean) / mc.std_error);
  }
  return {make("closed_form_vs_montecarlo_sigmas", worst, 4.0,
               count_detail(opts.samples, "samples per point"))};
}

Checks check_polynomial_exactness(const SuiteOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> v0_dist(1.0, 2000.0);
  std::uniform_real_distribution<double> vmp_dist(50.0, 1500.0);
  const PowerLawCrossSection pl(kUnitK, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double v0 = v0_dist(rng);
    const double vmp = vmp_dist(rng);
    const double moment = kUnitK * (v0 * v0 + 1.5 * vmp * vmp);
    worst = std::max(worst,
                     rel_err(v0 * sigma_macro_exact(perturbed(pl, opts.perturb_k), v0, vmp), moment));
  }
  return {make("alpha1_second_moment", worst, 1e-12, "20 random (v0, v_mp)")};
}

Checks check_series_expansion(const SuiteOptions& opts) {
  Checks out;
  out.push_back(make("series_first_coefficient", std::abs(series_coefficient(-0.4, 1) - 0.2), 1e-12));

  const PowerLawCrossSection pl(kUnitK, -0.4);
  const double vmp = 1.0;
  auto residual = [&](double x) {
    const double exact = sigma_macro_exact(perturbed(pl, opts.perturb_k), x * vmp, vmp);
    return std::abs(sigma_macro_series(pl, x * vmp, vmp, 1) - exact) / exact;
  };
  const double ratio = residual(1e-2) / residual(1e-3);
  out.push_back(make("series_residual_x4_scaling", std::abs(ratio / 1e4 - 1.0), 0.1,
                     "residual ratio x=1e-2 vs 1e-3"));
  return out;
}

Checks check_large_velocity_asymptote(const SuiteOptions& opts) {
  const double vmp = 1.0;
  const double v0 = 50.0;
  double worst = 0.0;
  for (double alpha : {-0.4, 0.0, 1.0}) {
    const PowerLawCrossSection pl(kUnitK, alpha);
    const double ratio = sigma_macro_exact(perturbed(pl, opts.perturb_k), v0, vmp) /
                         (kUnitK * std::pow(v0, alpha));
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return {make("large_velocity_asymptote", worst, 1e-2, "x = 50")};
}

Checks check_gr_identity(const SuiteOptions&) {
  double worst = 0.0;
  for (double mu : {0.8, 1.0, 1.3, 2.0}) {
    for (double g : {0.5, 2.0, 5.0}) {
      auto lhs = [mu, g](double x) {
        return std::pow(x, 2.0 * mu - 1.0) * std::exp(-x * x) * std::sinh(g * x);
      };
      const std::array<double, 4> breaks = {0.0, 0.5 * g, 0.5 * g + 6.0, 40.0};
      quad::QuadOptions q;
      q.abs_tol = 1e-300;
      q.rel_tol = 1e-13;
      const double oracle = quad::integrate(lhs, breaks, q).value;
      worst = std::max(worst, rel_err(specfun::gr_integral_closed_form(mu, g), oracle));
    }
  }
  return {make("gr_identity_vs_quadrature", worst, 1e-8, "12 (mu, gamma) pairs")};
}

Checks check_decoherence_function(const SuiteOptions&) {
  const ReferenceScenario s;
  const double rate = reference_rate(s);
  const double width = reference_q_width(s);
  const double length = PhysicalConstants::reduced_planck / width;
  const MomentumKernel kernel = kernel_gaussian(rate, width, 1024);

  Checks out;
  out.push_back(make("decoherence_function_at_zero", std::abs(decoherence_function(kernel, 0.0)), 0.0));
  out.push_back(make("decoherence_function_saturates",
                     std::abs(decoherence_function(kernel, 1e3 * length) - rate) / rate, 1e-3,
                     "delta = 1e3 hbar/q_width"));
  double worst = 0.0;
  for (double d : {0.1, 1.0, 10.0}) {
    const double analytic = rate * -std::expm1(-0.5 * d * d);
    worst = std::max(worst, std::abs(decoherence_function(kernel, d * length) - analytic) / rate);
  }
  out.push_back(make("decoherence_function_gaussian_oracle", worst, 1e-6,
                     "delta in {0.1, 1, 10} hbar/q_width"));
  return out;
}

Checks check_density_matrix_evolution(const SuiteOptions&) {
  const ReferenceScenario s;
  const double rate = reference_rate(s);
  const double width = reference_q_width(s);
  const double length = PhysicalConstants::reduced_planck / width;
  const MomentumKernel kernel = kernel_gaussian(rate, width, 1024);

  const double separation = 200.0 * length;
  const DensityMatrix rho0 = DensityMatrix::two_packet_superposition(
      -150.0 * length, length, 301, -0.5 * separation, 0.5 * separation, 5.0 * length);
  const double lobe0 = rho0.off_diagonal_norm(0.5 * separation);
  const double scale = rho0.values().cwiseAbs().maxCoeff();

  double trace_herm = 0.0;
  double diagonal = 0.0;
  double lobe = 0.0;
  for (int step = 0; step <= 12; ++step) {
    const double gt = 0.25 * step;
    const DensityMatrix rho = evolve_density_matrix(rho0, kernel, gt / rate);
    trace_herm = std::max({trace_herm, std::abs(rho.trace() - 1.0), rho.hermiticity_defect() / scale});
    diagonal = std::max(diagonal, (rho.values().diagonal() - rho0.values().diagonal()).cwiseAbs().maxCoeff());
    lobe = std::max(lobe, rel_err(rho.off_diagonal_norm(0.5 * separation) / lobe0, std::exp(-gt)));
  }

  const double t1 = 0.7 / rate;
  const double t2 = 1.6 / rate;
  const DensityMatrix two_step = evolve_density_matrix(evolve_density_matrix(rho0, kernel, t1), kernel, t2);
  const DensityMatrix one_step = evolve_density_matrix(rho0, kernel, t1 + t2);
  const double semigroup = (two_step.values() - one_step.values()).cwiseAbs().maxCoeff() / scale;

  return {make("density_matrix_trace_hermiticity", trace_herm, 1e-12),
          make("density_matrix_diagonal_invariant", diagonal, 0.0),
          make("density_matrix_far_lobe_decay", lobe, 1e-3, "Gamma t in [0, 3]"),
          make("density_matrix_semigroup", semigroup, 1e-12)};
}

Checks check_visibility_scan(const SuiteOptions&) {
  const ReferenceScenario s;
  const GasState gas = reference_gas(s);
  ScanConfig cfg{gas, reference_beam(s), k_from_c6(s.c6), s.flight_time, 0.9, 1e-6, 1e-3, 2};
  const double p_half = visibility_pressure_scan(cfg).pressure_half;
  cfg.pressure_min = p_half / 100.0;
  cfg.pressure_max = p_half * 100.0;
  cfg.points = 41;
  const ScanResult scan = visibility_pressure_scan(cfg);

  // Least-squares line through (p, ln(V/V0)).
  const double n = static_cast<double>(scan.rows.size());
  double sp = 0.0, sy = 0.0, spp = 0.0, spy = 0.0, ymax = 0.0;
  for (const auto& r : scan.rows) {
    const double y = std::log(r.visibility / cfg.reference_visibility);
    sp += r.pressure;
    sy += y;
    spp += r.pressure * r.pressure;
    spy += r.pressure * y;
    ymax = std::max(ymax, std::abs(y));
  }
  const double slope = (n * spy - sp * sy) / (n * spp - sp * sp);
  const double intercept = (sy - slope * sp) / n;
  double residual = 0.0;
  for (const auto& r : scan.rows) {
    const double y = std::log(r.visibility / cfg.reference_visibility);
    residual = std::max(residual, std::abs(y - (slope * r.pressure + intercept)) / ymax);
  }

  double bracket_miss = 1.0;
  const double half = 0.5 * cfg.reference_visibility;
  for (std::size_t i = 0; i + 1 < scan.rows.size(); ++i) {
    const auto& a = scan.rows[i];
    const auto& b = scan.rows[i + 1];
    if (a.visibility >= half && b.visibility <= half) {
      bracket_miss = (a.pressure <= scan.pressure_half && scan.pressure_half <= b.pressure) ? 0.0 : 1.0;
      break;
    }
  }
  return {make("visibility_log_linear_in_pressure", residual, 1e-12, "41 log-spaced pressures"),
          make("visibility_half_pressure_bracketed", bracket_miss, 0.0)};
}

Checks run_all(const SuiteOptions& opts) {
  Checks all;
  for (auto* group : {check_closed_vs_quadrature, check_closed_vs_montecarlo,
                      check_polynomial_exactness, check_series_expansion,
                      check_large_velocity_asymptote, check_gr_identity,
                      check_decoherence_function, check_density_matrix_evolution,
                      check_visibility_scan}) {
    for (auto& c : group(opts)) all.push_back(std::move(c));
  }
  return all;
}

}  // namespace deco::validation

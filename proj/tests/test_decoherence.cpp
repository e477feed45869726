#include <cmath>
#include <numbers>
#include <random>

#include "decokit/decoherence.hpp"
#include "decokit/errors.hpp"
#include "doctest.h"

using namespace deco;

namespace {

constexpr double kHbar = PhysicalConstants::reduced_planck;
constexpr double kAmu = PhysicalConstants::atomic_mass_unit;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

GasState argon(double number_density = 0.0) { return GasState(300.0, 39.948 * kAmu, number_density); }
BeamState c70() { return BeamState(840.77 * kAmu, 100.0); }

// C6 = 2.9e-76 J m^6, 1e-4 Pa. Values from an mpmath script.
constexpr double kChainSigma = 6.928590017370505308854710387129963167249e-17;
constexpr double kChainRate = 167.278577378476965273933017180808039486;

double chain_rate() {
  const GasState gas = argon(density_from_pressure(1e-4, 300.0));
  const double sigma = sigma_macro_exact(k_from_c6(2.9e-76), 100.0, most_probable_speed(gas));
  return decoherence_rate(gas, c70(), sigma);
}

ScanConfig scan_config(double pmin, double pmax, int points, double flight_time = 2.5e-3) {
  return ScanConfig{argon(), c70(), k_from_c6(2.9e-76), flight_time, 0.8, pmin, pmax, points};
}

}  // namespace

TEST_CASE("decoherence_rate") {
  CHECK(decoherence_rate(argon(0.0), c70(), 1e-17) == 0.0);
  CHECK(decoherence_rate(GasState(300.0, 1.0, 1.0), BeamState(1.0, 1.0), 1.0) == 1.0);
  const GasState gas = argon(density_from_pressure(1e-4, 300.0));
  CHECK(rel(sigma_macro_exact(k_from_c6(2.9e-76), 100.0, most_probable_speed(gas)), kChainSigma) < 1e-13);
  CHECK(rel(chain_rate(), kChainRate) < 1e-13);
  CHECK_THROWS_AS(decoherence_rate(gas, c70(), -1.0), DomainError);
}

TEST_CASE("visibility") {
  CHECK(visibility(0.7, 123.0, 0.0) == 0.7);
  CHECK(visibility(0.7, std::numbers::ln2, 1.0) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(rel(visibility(1.0, chain_rate(), 1e-3), 0.8459639120995558866252205991494309602178) < 1e-13);
  CHECK_THROWS_AS(visibility(1.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(visibility(0.5, -1.0, 1.0), DomainError);
}

TEST_CASE("visibility_pressure_scan") {
  const ScanResult scan = visibility_pressure_scan(scan_config(1e-6, 1e-3, 25));
  REQUIRE(scan.rows.size() == 25);
  CHECK(scan.rows.front().pressure == 1e-6);
  CHECK(scan.rows.back().pressure == 1e-3);
  CHECK(rel(scan.pressure_half, 0.0001657467899171958542242553772495175248479) < 1e-13);

  // ln(V/V0) / p is the same constant for every row.
  const double slope = std::log(scan.rows.front().visibility / 0.8) / scan.rows.front().pressure;
  for (const auto& r : scan.rows) {
    CHECK(std::abs(std::log(r.visibility / 0.8) - slope * r.pressure) <= 1e-12 * std::abs(slope * r.pressure));
    CHECK(rel(r.number_density, density_from_pressure(r.pressure, 300.0)) < 1e-15);
  }

  const double doubled = visibility_pressure_scan(scan_config(1e-6, 1e-3, 2, 5e-3)).pressure_half;
  CHECK(rel(doubled, 0.5 * scan.pressure_half) < 1e-14);

  // 1e-8, 1e-7, 1e-6 mbar
  const ScanResult three = visibility_pressure_scan(scan_config(1e-6, 1e-4, 3));
  CHECK(rel(three.rows[1].pressure, 1e-5) < 1e-14);
  CHECK(three.rows[0].visibility > three.rows[1].visibility);
  CHECK(three.rows[1].visibility > three.rows[2].visibility);

  CHECK_THROWS_AS(visibility_pressure_scan(scan_config(1e-3, 1e-6, 5)), DomainError);
  CHECK_THROWS_AS(visibility_pressure_scan(scan_config(1e-6, 1e-3, 1)), DomainError);
}

TEST_CASE("kernel construction") {
  const double width = 2.3e-23;
  const MomentumKernel k = kernel_gaussian(150.0, width, 256);
  CHECK(rel(k.integrated_rate(), 150.0) < 1e-9);
  CHECK(k.gamma_total() == 150.0);
  for (double w : k.weights()) CHECK(w >= 0.0);
  CHECK(k.q_grid().back() == doctest::Approx(8.0 * width).epsilon(1e-15));

  const MomentumKernel k2 = kernel_gaussian(300.0, width, 256);
  for (std::size_t i = 0; i < k.weights().size(); ++i) {
    CHECK(rel(k2.weights()[i], 2.0 * k.weights()[i]) < 1e-14);
  }

  // Re-tabulating the Gaussian weights reproduces the kernel.
  const MomentumKernel copy = kernel_from_table(k.q_grid(), k.weights(), 150.0);
  for (std::size_t i = 0; i < k.weights().size(); ++i) {
    CHECK(std::abs(copy.weights()[i] - k.weights()[i]) <= 1e-9 * k.weights()[0]);
  }

  CHECK_THROWS_AS(kernel_gaussian(150.0, width, 63), DomainError);
  CHECK_THROWS_AS(kernel_gaussian(0.0, width, 64), DomainError);
  const std::vector<double> q = {0.0, 1.0, 2.0};
  CHECK_THROWS_AS(kernel_from_table(q, std::vector<double>{0.0, 0.0, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(kernel_from_table(q, std::vector<double>{1.0, -1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(kernel_from_table(std::vector<double>{0.0, 2.0, 1.0}, std::vector<double>{1.0, 1.0, 1.0}, 1.0),
                  DomainError);
  CHECK_THROWS_AS(kernel_from_table(q, std::vector<double>{1.0, 1.0}, 1.0), DomainError);
}

TEST_CASE("decoherence_function for a Gaussian kernel") {
  const double rate = chain_rate();
  const double width = 2.3e-23;
  const double length = kHbar / width;
  const MomentumKernel k = kernel_gaussian(rate, width, 1024);

  CHECK(decoherence_function(k, 0.0) == 0.0);
  // The radial Gaussian's characteristic function along any axis is
  // exp(-q_width^2 dx^2 / (2 hbar^2)).
  for (double d : {0.1, 1.0, 10.0}) {
    const double analytic = rate * -std::expm1(-0.5 * d * d);
    CHECK(std::abs(decoherence_function(k, d * length) - analytic) < 1e-6 * rate);
  }
  CHECK(std::abs(decoherence_function(k, 1e3 * length) - rate) < 1e-3 * rate);

  const MomentumKernel coarse = kernel_gaussian(rate, width, 64);
  for (double d : {0.05, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(decoherence_function(coarse, d * length) - decoherence_function(k, d * length)) < 1e-6 * rate);
  }

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double dx = dist(rng) * length;
    const double f = decoherence_function(k, dx);
    CHECK(f >= 0.0);
    CHECK(f <= 2.0 * rate);
    CHECK(f == decoherence_function(k, -dx));
  }
}

TEST_CASE("narrow shell kernel") {
  // A thin radial shell at q* gives F = Gamma (1 - sinc(q* dx / hbar)).
  const double q_star = 1e-23;
  const double spread = 1e-4 * q_star;
  std::vector<double> q, g;
  for (int i = 0; i <= 400; ++i) {
    const double qi = q_star + spread * (i - 200) / 40.0;
    q.push_back(qi);
    const double r = (qi - q_star) / spread;
    g.push_back(std::exp(-0.5 * r * r));
  }
  const MomentumKernel k = kernel_from_table(q, g, 10.0);
  for (double y : {0.5, 2.0, 7.0}) {
    const double dx = y * kHbar / q_star;
    CHECK(std::abs(decoherence_function(k, dx) - 10.0 * one_minus_sinc(y)) < 1e-3 * 10.0);
  }
}

TEST_CASE("one_minus_sinc") {
  CHECK(one_minus_sinc(0.0) == 0.0);
  CHECK(one_minus_sinc(1e-5) == doctest::Approx(1e-10 / 6.0).epsilon(1e-12));
  CHECK(one_minus_sinc(2.0) == doctest::Approx(1.0 - std::sin(2.0) / 2.0));
  CHECK(rel(one_minus_sinc(0.99e-4), one_minus_sinc(1.01e-4)) < 0.05);
}

TEST_CASE("density matrix evolution") {
  const double rate = chain_rate();
  const double width = 2.3e-23;
  const double length = kHbar / width;
  const MomentumKernel kernel = kernel_gaussian(rate, width, 1024);
  const double d = 200.0 * length;
  const DensityMatrix rho0 =
      DensityMatrix::two_packet_superposition(-150.0 * length, length, 301, -0.5 * d, 0.5 * d, 5.0 * length);

  CHECK(std::abs(rho0.trace() - 1.0) < 1e-12);
  CHECK(rho0.hermiticity_defect() < 1e-12 * rho0.values().cwiseAbs().maxCoeff());

  const DensityMatrix same = evolve_density_matrix(rho0, kernel, 0.0);
  CHECK(same.values() == rho0.values());

  const double lobe0 = rho0.off_diagonal_norm(0.5 * d);
  for (double gt : {0.3, 1.0, 2.2, 3.0}) {
    const DensityMatrix rho = evolve_density_matrix(rho0, kernel, gt / rate);
    CHECK(rho.values().diagonal() == rho0.values().diagonal());
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK(rho.hermiticity_defect() == 0.0);
    CHECK(rel(rho.off_diagonal_norm(0.5 * d) / lobe0, std::exp(-gt)) < 1e-3);
  }

  const double t1 = 0.4 / rate, t2 = 1.1 / rate;
  const auto twice = evolve_density_matrix(evolve_density_matrix(rho0, kernel, t1), kernel, t2);
  const auto once = evolve_density_matrix(rho0, kernel, t1 + t2);
  CHECK((twice.values() - once.values()).cwiseAbs().maxCoeff() < 1e-12 * rho0.values().cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(evolve_density_matrix(rho0, kernel, -1.0), DomainError);
}

TEST_CASE("DensityMatrix construction") {
  DensityMatrix::Matrix m = DensityMatrix::Matrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = 2.0;
  m(0, 1) = {0.5, 0.25};
  m(1, 0) = {0.5, -0.25};
  const DensityMatrix rho(0.0, 0.5, m);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho.x(2) == 1.0);

  m(1, 0) = {0.5, 0.25};
  CHECK_THROWS_AS(DensityMatrix(0.0, 0.5, m), DomainError);
  CHECK_THROWS_AS(DensityMatrix(0.0, 0.5, DensityMatrix::Matrix::Zero(2, 3)), DomainError);
  CHECK_THROWS_AS(DensityMatrix(0.0, 0.5, DensityMatrix::Matrix::Zero(2, 2)), DomainError);
  CHECK_THROWS_AS(DensityMatrix(0.0, 0.0, DensityMatrix::Matrix::Identity(2, 2)), DomainError);
}

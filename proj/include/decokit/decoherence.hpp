#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "decokit/gas.hpp"
#include "decokit/xsection.hpp"

namespace deco {

/// n v0 sigma [1/s].
double decoherence_rate(const GasState& gas, const BeamState& beam, double sigma);

/// V0 exp(-rate * time). Throws DomainError for V0 outside (0, 1] or
/// negative rate/time.
double visibility(double v0_ref, double rate, double time);

struct ScanConfig {
  GasState gas;  // temperature and particle mass; density is scanned
  BeamState beam;
  PowerLawCrossSection cross_section;
  double flight_time = 0.0;           // s
  double reference_visibility = 1.0;  // V0
  double pressure_min = 0.0;          // Pa
  double pressure_max = 0.0;          // Pa
  int points = 2;

  // Throws DomainError when the scan is ill-posed.
  void validate() const;
};

struct ScanRow {
  double pressure;  // Pa
  double number_density;
  double rate;
  double visibility;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double sigma_macro = 0.0;
  // Pressure at which V = V0 / 2.
  double pressure_half = 0.0;
};

/// Visibility at `points` log-spaced pressures between pressure_min and
/// pressure_max, with sigma_macro fixed by the gas temperature and v0.
ScanResult visibility_pressure_scan(const ScanConfig& cfg);

/// Isotropic momentum-transfer kernel G(q) sampled on a radial grid.
/// Weights are normalized so that the trapezoidal value of
/// int G(q) 4 pi q^2 dq equals gamma_total.
class MomentumKernel {
public:
  std::span<const double> q_grid() const { return q_grid_; }
  std::span<const double> weights() const { return weights_; }
  double gamma_total() const { return gamma_total_; }

  // Trapezoidal int G(q) 4 pi q^2 dq with the stored weights.
  double integrated_rate() const;

private:
  friend MomentumKernel kernel_from_table(std::span<const double>, std::span<const double>, double);

  std::vector<double> q_grid_;
  std::vector<double> weights_;
  double gamma_total_ = 0.0;
};

/// Radial Gaussian G(q) ~ exp(-q^2 / (2 q_width^2)) on [0, 8 q_width].
/// Throws DomainError unless gamma_total > 0, q_width > 0, q_points >= 64.
MomentumKernel kernel_gaussian(double gamma_total, double q_width, int q_points);

/// Kernel from tabulated G(q). The grid must be non-negative and strictly
/// increasing, the weights non-negative with positive integral. Throws
/// DomainError otherwise.
MomentumKernel kernel_from_table(std::span<const double> q_grid, std::span<const double> weights,
                                 double renormalize_to);

/// Decay rate of rho(x, x + delta_x) under the collision terms,
///   F(dx) = int G(q) 4 pi q^2 [1 - sinc(q dx / hbar)] dq,
/// trapezoidal on the kernel grid. F(0) = 0 and F -> gamma_total as
/// |dx| -> infinity.
double decoherence_function(const MomentumKernel& kernel, double delta_x);

/// 1 - sin(y)/y, using its Taylor series for |y| < 1e-4.
double one_minus_sinc(double y);

/// Density matrix on a uniform 1-D position grid. Construction normalizes
/// the grid-weighted trace sum_i rho_ii dx to one.
class DensityMatrix {
public:
  using Matrix = Eigen::MatrixXcd;

  // Throws DomainError for a non-square, size-mismatched or non-Hermitian
  // (beyond 1e-12 relative) matrix, or a non-positive trace.
  DensityMatrix(double x0, double dx, Matrix values);

  /// |psi><psi| for a wave function sampled on the grid.
  static DensityMatrix pure_state(double x0, double dx, std::span<const std::complex<double>> psi);

  /// Equal-weight superposition of two Gaussian packets of width `sigma`
  /// centred at `center_a` and `center_b`.
  static DensityMatrix two_packet_superposition(double x0, double dx, int n, double center_a,
                                                double center_b, double sigma);

  int size() const { return static_cast<int>(values_.rows()); }
  double x0() const { return x0_; }
  double dx() const { return dx_; }
  double x(int i) const { return x0_ + dx_ * i; }
  const Matrix& values() const { return values_; }

  double trace() const;
  // max |rho_ij - conj(rho_ji)|
  double hermiticity_defect() const;
  // Frobenius norm of the entries with |x_i - x_j| > min_separation.
  double off_diagonal_norm(double min_separation) const;

private:
  friend DensityMatrix evolve_density_matrix(const DensityMatrix&, const MomentumKernel&, double);

  DensityMatrix(double x0, double dx, Matrix values, bool normalize);

  double x0_;
  double dx_;
  Matrix values_;
};

/// Collisions-only evolution rho(x, x', t) = rho(x, x', 0) exp(-F(x - x') t).
/// Throws DomainError for negative time.
DensityMatrix evolve_density_matrix(const DensityMatrix& rho0, const MomentumKernel& kernel,
                                    double time);

}  // namespace deco

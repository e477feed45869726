#include "decokit/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decokit/errors.hpp"

namespace deco {

double decoherence_rate(const GasState& gas, const BeamState& beam, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("decoherence_rate: cross-section must be non-negative");
  }
  return gas.number_density() * beam.speed_v0() * sigma;
}

double visibility(double v0_ref, double rate, double time) {
  if (!(v0_ref > 0.0 && v0_ref <= 1.0)) throw DomainError("visibility: V0 must lie in (0, 1]");
  if (!(rate >= 0.0) || !(time >= 0.0)) {
    throw DomainError("visibility: rate and time must be non-negative");
  }
  return v0_ref * std::exp(-rate * time);
}

void ScanConfig::validate() const {
  if (!(pressure_min > 0.0) || !(pressure_min < pressure_max) || !std::isfinite(pressure_max)) {
    throw DomainError("ScanConfig: need 0 < pressure_min < pressure_max");
  }
  if (points < 2) throw DomainError("ScanConfig: need at least two points");
  if (!(flight_time > 0.0) || !std::isfinite(flight_time)) {
    throw DomainError("ScanConfig: flight time must be positive");
  }
  if (!(reference_visibility > 0.0 && reference_visibility <= 1.0)) {
    throw DomainError("ScanConfig: reference visibility must lie in (0, 1]");
  }
}

ScanResult visibility_pressure_scan(const ScanConfig& cfg) {
  cfg.validate();
  const double temperature = cfg.gas.temperature();
  const double v0 = cfg.beam.speed_v0();

  ScanResult out;
  out.sigma_macro = sigma_macro_exact(cfg.cross_section, v0, most_probable_speed(cfg.gas));
  out.pressure_half = std::numbers::ln2 * PhysicalConstants::boltzmann_constant * temperature /
                      (v0 * out.sigma_macro * cfg.flight_time);

  const double log_min = std::log(cfg.pressure_min);
  const double log_step = (std::log(cfg.pressure_max) - log_min) / (cfg.points - 1);
  out.rows.reserve(static_cast<std::size_t>(cfg.points));
  for (int i = 0; i < cfg.points; ++i) {
    // Pin the end points exactly.
    const double p = i == 0                ? cfg.pressure_min
                     : i == cfg.points - 1 ? cfg.pressure_max
                                           : std::exp(log_min + log_step * i);
    const double n = density_from_pressure(p, temperature);
    const double rate = decoherence_rate(cfg.gas.with_density(n), cfg.beam, out.sigma_macro);
    out.rows.push_back({p, n, rate, visibility(cfg.reference_visibility, rate, cfg.flight_time)});
  }
  return out;
}

double MomentumKernel::integrated_rate() const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < q_grid_.size(); ++i) {
    const double a = weights_[i] * q_grid_[i] * q_grid_[i];
    const double b = weights_[i + 1] * q_grid_[i + 1] * q_grid_[i + 1];
    sum += 0.5 * (q_grid_[i + 1] - q_grid_[i]) * (a + b);
  }
  return 4.0 * std::numbers::pi * sum;
}

MomentumKernel kernel_from_table(std::span<const double> q_grid, std::span<const double> weights,
                                 double renormalize_to) {
  if (q_grid.size() < 2 || q_grid.size() != weights.size()) {
    throw DomainError("kernel_from_table: need matching grids of at least two points");
  }
  if (!(renormalize_to > 0.0) || !std::isfinite(renormalize_to)) {
    throw DomainError("kernel_from_table: target rate must be positive");
  }
  if (!(q_grid.front() >= 0.0)) throw DomainError("kernel_from_table: momenta must be non-negative");
  for (std::size_t i = 0; i + 1 < q_grid.size(); ++i) {
    if (!(q_grid[i] < q_grid[i + 1])) {
      throw DomainError("kernel_from_table: momentum grid must be strictly increasing");
    }
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("kernel_from_table: weights must be non-negative");
    }
  }

  MomentumKernel k;
  k.q_grid_.assign(q_grid.begin(), q_grid.end());
  k.weights_.assign(weights.begin(), weights.end());
  const double raw = k.integrated_rate();
  if (!(raw > 0.0)) throw DomainError("kernel_from_table: kernel integrates to zero");
  const double scale = renormalize_to / raw;
  for (double& w : k.weights_) w *= scale;
  k.gamma_total_ = renormalize_to;
  return k;
}

MomentumKernel kernel_gaussian(double gamma_total, double q_width, int q_points) {
  if (!(gamma_total > 0.0) || !(q_width > 0.0)) {
    throw DomainError("kernel_gaussian: rate and width must be positive");
  }
  if (q_points < 64) throw DomainError("kernel_gaussian: need at least 64 grid points");
  std::vector<double> q(static_cast<std::size_t>(q_points));
  std::vector<double> g(q.size());
  const double q_max = 8.0 * q_width;
  for (int i = 0; i < q_points; ++i) {
    q[i] = q_max * i / (q_points - 1);
    const double r = q[i] / q_width;
    g[i] = std::exp(-0.5 * r * r);
  }
  return kernel_from_table(q, g, gamma_total);
}

double one_minus_sinc(double y) {
  const double y2 = y * y;
  if (std::abs(y) < 1e-4) return y2 / 6.0 - y2 * y2 / 120.0;
  return 1.0 - std::sin(y) / y;
}

double decoherence_function(const MomentumKernel& kernel, double delta_x) {
  const auto q = kernel.q_grid();
  const auto g = kernel.weights();
  const double k = delta_x / PhysicalConstants::reduced_planck;
  auto integrand = [&](std::size_t i) { return g[i] * q[i] * q[i] * one_minus_sinc(q[i] * k); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    sum += 0.5 * (q[i + 1] - q[i]) * (integrand(i) + integrand(i + 1));
  }
  return 4.0 * std::numbers::pi * sum;
}

DensityMatrix::DensityMatrix(double x0, double dx, Matrix values)
    : DensityMatrix(x0, dx, std::move(values), true) {}

DensityMatrix::DensityMatrix(double x0, double dx, Matrix values, bool normalize)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  if (!(dx > 0.0) || !std::isfinite(x0)) throw DomainError("DensityMatrix: need dx > 0");
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw DomainError("DensityMatrix: matrix must be square and non-empty");
  }
  if (!normalize) return;
  const double scale = values_.cwiseAbs().maxCoeff();
  if (hermiticity_defect() > 1e-12 * scale) throw DomainError("DensityMatrix: not Hermitian");
  const double tr = trace();
  if (!(tr > 0.0)) throw DomainError("DensityMatrix: trace must be positive");
  values_ /= tr;
  // Symmetrize away the residual rounding so the invariant holds exactly.
  values_ = (0.5 * (values_ + values_.adjoint())).eval();
}

DensityMatrix DensityMatrix::pure_state(double x0, double dx,
                                        std::span<const std::complex<double>> psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  return DensityMatrix(x0, dx, v * v.adjoint());
}

DensityMatrix DensityMatrix::two_packet_superposition(double x0, double dx, int n,
                                                      double center_a, double center_b,
                                                      double sigma) {
  if (n < 2 || !(sigma > 0.0)) throw DomainError("two_packet_superposition: bad grid or width");
  std::vector<std::complex<double>> psi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = x0 + dx * i;
    const double ua = (x - center_a) / sigma;
    const double ub = (x - center_b) / sigma;
    psi[i] = std::exp(-0.25 * ua * ua) + std::exp(-0.25 * ub * ub);
  }
  return pure_state(x0, dx, psi);
}

double DensityMatrix::trace() const { return values_.diagonal().real().sum() * dx_; }

double DensityMatrix::hermiticity_defect() const {
  return (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::off_diagonal_norm(double min_separation) const {
  double sum = 0.0;
  const int n = size();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(i - j) * dx_ > min_separation) sum += std::norm(values_(i, j));
    }
  }
  return std::sqrt(sum);
}

DensityMatrix evolve_density_matrix(const DensityMatrix& rho0, const MomentumKernel& kernel,
                                    double time) {
  if (!(time >= 0.0) || !std::isfinite(time)) {
    throw DomainError("evolve_density_matrix: time must be non-negative");
  }
  const int n = rho0.size();
  // The grid is uniform, so damping depends on |i - j| only.
  std::vector<double> damping(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    damping[k] = std::exp(-decoherence_function(kernel, k * rho0.dx()) * time);
  }
  DensityMatrix::Matrix out = rho0.values();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) out(i, j) *= damping[static_cast<std::size_t>(std::abs(i - j))];
  }
  return DensityMatrix(rho0.x0(), rho0.dx(), std::move(out), false);
}

}  // namespace deco

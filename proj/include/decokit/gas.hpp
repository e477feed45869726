#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace deco {

using Vec3 = std::array<double, 3>;

inline double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// CODATA 2018 exact / recommended values, SI.
struct PhysicalConstants {
  static constexpr double boltzmann_constant = 1.380649e-23;  // J/K
  static constexpr double reduced_planck = 1.054571817e-34;   // J s
  static constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
};

inline constexpr double kMillibarInPascal = 100.0;

/// Thermal background gas: temperature [K], particle mass m [kg] and
/// number density n [1/m^3]. Immutable once constructed.
class GasState {
public:
  // Throws DomainError unless temperature > 0, particle_mass > 0 and
  // number_density >= 0.
  GasState(double temperature, double particle_mass, double number_density = 0.0);

  double temperature() const { return temperature_; }
  double particle_mass() const { return particle_mass_; }
  double number_density() const { return number_density_; }
  // 1 / (k_B T)
  double beta() const { return 1.0 / (PhysicalConstants::boltzmann_constant * temperature_); }

  GasState with_density(double number_density) const;

private:
  double temperature_;
  double particle_mass_;
  double number_density_;
};

/// sqrt(2 k_B T / m), the mode of the Maxwell-Boltzmann speed distribution.
double most_probable_speed(const GasState& gas);

/// Ideal gas law n = p / (k_B T). Throws DomainError for p < 0 or T <= 0.
double density_from_pressure(double pressure, double temperature);

/// Maxwell-Boltzmann velocity density (pi v_mp^2)^(-3/2) exp(-|u|^2 / v_mp^2).
double mb_pdf(const Vec3& u, const GasState& gas);

/// Cumulative distribution of the speed |u| under mb_pdf.
double mb_speed_cdf(double speed, const GasState& gas);

/// `count` independent velocity draws from mb_pdf, starting at sample
/// index 0. Equivalent to mb_sample_range(gas, seed, 0, count).
std::vector<Vec3> mb_sample(const GasState& gas, std::uint64_t seed, std::size_t count);

/// Draws with indices [first, first + count). Draw i depends only on
/// (seed, i), so any partition of the index range reproduces the same
/// sequence.
std::vector<Vec3> mb_sample_range(const GasState& gas, std::uint64_t seed, std::uint64_t first,
                                  std::size_t count);

/// Single draw with index `index`.
Vec3 mb_draw(const GasState& gas, std::uint64_t seed, std::uint64_t index);

/// Counter-seeded generator behind the sampler.
///
/// The stream for (seed, index) starts from the SplitMix64 finalizer of
/// seed + (index + 1) * golden_gamma, then advances as plain SplitMix64.
/// Uniforms take the top 53 bits.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double next_unit();
  // Standard normal pair via Marsaglia's polar method.
  std::array<double, 2> next_gaussian_pair();

private:
  std::uint64_t state_;
};

}  // namespace deco

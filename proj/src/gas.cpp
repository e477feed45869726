#include "decokit/gas.hpp"

#include <cmath>
#include <numbers>

#include "decokit/errors.hpp"

namespace deco {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

GasState::GasState(double temperature, double particle_mass, double number_density)
    : temperature_(temperature), particle_mass_(particle_mass), number_density_(number_density) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError("GasState: temperature must be positive");
  }
  if (!(particle_mass > 0.0) || !std::isfinite(particle_mass)) {
    throw DomainError("GasState: particle mass must be positive");
  }
  if (!(number_density >= 0.0) || !std::isfinite(number_density)) {
    throw DomainError("GasState: number density must be non-negative");
  }
}

GasState GasState::with_density(double number_density) const {
  return GasState(temperature_, particle_mass_, number_density);
}

double most_probable_speed(const GasState& gas) {
  return std::sqrt(2.0 * PhysicalConstants::boltzmann_constant * gas.temperature() /
                   gas.particle_mass());
}

double density_from_pressure(double pressure, double temperature) {
  if (!(pressure >= 0.0) || !std::isfinite(pressure)) {
    throw DomainError("density_from_pressure: pressure must be non-negative");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError("density_from_pressure: temperature must be positive");
  }
  return pressure / (PhysicalConstants::boltzmann_constant * temperature);
}

double mb_pdf(const Vec3& u, const GasState& gas) {
  const double vmp2 = 2.0 * PhysicalConstants::boltzmann_constant * gas.temperature() /
                      gas.particle_mass();
  return std::pow(std::numbers::pi * vmp2, -1.5) * std::exp(-norm2(u) / vmp2);
}

double mb_speed_cdf(double speed, const GasState& gas) {
  if (speed <= 0.0) return 0.0;
  const double s = speed / most_probable_speed(gas);
  return std::erf(s) - 2.0 * std::numbers::inv_sqrtpi * s * std::exp(-s * s);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
    : state_(splitmix_finalize(seed + (index + 1) * kGoldenGamma)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGoldenGamma;
  return splitmix_finalize(state_);
}

double CounterRng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::array<double, 2> CounterRng::next_gaussian_pair() {
  for (;;) {
    const double x = 2.0 * next_unit() - 1.0;
    const double y = 2.0 * next_unit() - 1.0;
    const double s = x * x + y * y;
    if (s > 0.0 && s < 1.0) {
      const double scale = std::sqrt(-2.0 * std::log(s) / s);
      return {x * scale, y * scale};
    }
  }
}

Vec3 mb_draw(const GasState& gas, std::uint64_t seed, std::uint64_t index) {
  // Each Cartesian component has standard deviation v_mp / sqrt(2).
  const double sd = most_probable_speed(gas) * std::numbers::sqrt2 * 0.5;
  CounterRng rng(seed, index);
  const auto first = rng.next_gaussian_pair();
  const auto second = rng.next_gaussian_pair();
  return {sd * first[0], sd * first[1], sd * second[0]};
}

std::vector<Vec3> mb_sample_range(const GasState& gas, std::uint64_t seed, std::uint64_t first,
                                  std::size_t count) {
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(mb_draw(gas, seed, first + i));
  return out;
}

std::vector<Vec3> mb_sample(const GasState& gas, std::uint64_t seed, std::size_t count) {
  if (count == 0) throw DomainError("mb_sample: count must be positive");
  return mb_sample_range(gas, seed, 0, count);
}

}  // namespace deco

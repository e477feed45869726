#include "decokit/xsection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "decokit/errors.hpp"
#include "decokit/quadrature.hpp"

namespace deco {

namespace {

void require_speed(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be a positive finite speed");
  }
}

// K (2/sqrt(pi)) Gamma(alpha/2 + 2) v_mp^(alpha+1) / v0
double leading_factor(const PowerLawCrossSection& pl, double v0, double vmp) {
  const double alpha = pl.exponent_alpha();
  return pl.prefactor_k() * 2.0 * std::numbers::inv_sqrtpi * specfun::gamma(0.5 * alpha + 2.0) *
         std::pow(vmp, alpha + 1.0) / v0;
}

constexpr std::size_t kMonteCarloBlock = 1u << 16;

struct BlockMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations
};

BlockMoments merge(const BlockMoments& a, const BlockMoments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  BlockMoments out;
  out.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  const double nb_over_n = static_cast<double>(b.count) / static_cast<double>(out.count);
  out.mean = a.mean + delta * nb_over_n;
  out.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.count) * nb_over_n;
  return out;
}

}  // namespace

PowerLawCrossSection::PowerLawCrossSection(double prefactor_k, double exponent_alpha)
    : prefactor_k_(prefactor_k), exponent_alpha_(exponent_alpha) {
  if (!(prefactor_k > 0.0) || !std::isfinite(prefactor_k)) {
    throw DomainError("PowerLawCrossSection: K must be positive");
  }
  if (!(exponent_alpha > -4.0) || !std::isfinite(exponent_alpha)) {
    throw DomainError("PowerLawCrossSection: alpha must exceed -4");
  }
}

BeamState::BeamState(double test_mass, double speed_v0)
    : test_mass_(test_mass), speed_v0_(speed_v0) {
  if (!(test_mass > 0.0) || !std::isfinite(test_mass)) {
    throw DomainError("BeamState: test mass must be positive");
  }
  require_speed(speed_v0, "BeamState: v0");
}

PowerLawCrossSection k_from_c6(double c6, const PhysicalConstants& constants) {
  if (!(c6 > 0.0) || !std::isfinite(c6)) throw DomainError("k_from_c6: C6 must be positive");
  constexpr double two_fifths = 0.4;
  const double pi = std::numbers::pi;
  const double numeric = std::pow(std::pow(pi, 6) * 3.0 / 8.0, two_fifths) /
                         (std::sin(pi / 5.0) * specfun::gamma(two_fifths));
  return {numeric * std::pow(c6 / constants.reduced_planck, two_fifths), -two_fifths};
}

double sigma_micro(const PowerLawCrossSection& pl, double v_rel) {
  if (v_rel == 0.0 && pl.exponent_alpha() >= 0.0) {
    return pl.exponent_alpha() == 0.0 ? pl.prefactor_k() : 0.0;
  }
  if (!(v_rel > 0.0) || !std::isfinite(v_rel)) {
    throw DomainError("sigma_micro: relative speed must be positive");
  }
  return pl.prefactor_k() * std::pow(v_rel, pl.exponent_alpha());
}

double sigma_macro_exact(const PowerLawCrossSection& pl, double v0, double vmp,
                         const specfun::SpecfunConfig& cfg) {
  require_speed(v0, "sigma_macro_exact: v0");
  require_speed(vmp, "sigma_macro_exact: v_mp");
  const double alpha = pl.exponent_alpha();
  const double x = v0 / vmp;
  return leading_factor(pl, v0, vmp) * specfun::kummer_m(-(0.5 * alpha + 0.5), 1.5, -x * x, cfg);
}

double series_coefficient(double alpha, int n) {
  if (n < 0) throw DomainError("series_coefficient: n must be non-negative");
  const double a = -(0.5 * alpha + 0.5);
  double c = 1.0;
  for (int k = 0; k < n; ++k) c *= -(a + k) / ((1.5 + k) * (k + 1));
  return c;
}

double sigma_macro_series(const PowerLawCrossSection& pl, double v0, double vmp, int order) {
  require_speed(v0, "sigma_macro_series: v0");
  require_speed(vmp, "sigma_macro_series: v_mp");
  if (order < 0 || order > 10) throw DomainError("sigma_macro_series: order must be in [0, 10]");
  const double x2 = (v0 / vmp) * (v0 / vmp);
  // Horner in x^2.
  double bracket = 0.0;
  for (int n = order; n >= 0; --n) bracket = bracket * x2 + series_coefficient(pl.exponent_alpha(), n);
  return leading_factor(pl, v0, vmp) * bracket;
}

double sigma_macro_quadrature(const PowerLawCrossSection& pl, double v0, double vmp,
                              double abs_tol, double rel_tol) {
  require_speed(v0, "sigma_macro_quadrature: v0");
  require_speed(vmp, "sigma_macro_quadrature: v_mp");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("sigma_macro_quadrature: tolerances must be positive");
  }
  const double alpha = pl.exponent_alpha();
  const double x = v0 / vmp;
  const double power = alpha + 2.0;

  // exp(-x^2) exp(-t^2) sinh(2 t x) without overflow or cancellation.
  auto integrand = [x, power](double t) {
    if (t <= 0.0) return 0.0;
    const double shifted = t - x;
    return std::pow(t, power) * 0.5 * std::exp(-shifted * shifted) * -std::expm1(-4.0 * t * x);
  };

  const double scale = pl.prefactor_k() * 2.0 * std::numbers::inv_sqrtpi *
                       std::pow(vmp, alpha + 2.0) / (v0 * v0);
  quad::QuadOptions opts;
  opts.abs_tol = abs_tol / scale;
  opts.rel_tol = rel_tol;

  // Past x + 12 the Gaussian factor is below exp(-144).
  const double upper = std::max(x, std::sqrt(std::max(power, 0.0) / 2.0)) + 12.0;

  double integral = 0.0;
  double regular_from = 0.0;
  if (pl.singular_endpoint()) {
    // t = s^p on [0, 1] turns t^(alpha+3) near the origin into s^1.
    const double p = 2.0 / (alpha + 4.0);
    auto substituted = [&integrand, p](double s) {
      if (s <= 0.0) return 0.0;
      return integrand(std::pow(s, p)) * p * std::pow(s, p - 1.0);
    };
    integral += quad::integrate(substituted, 0.0, 1.0, opts).value;
    regular_from = 1.0;
  }

  std::vector<double> breaks = {regular_from};
  if (x > regular_from && x < upper) breaks.push_back(x);
  breaks.push_back(upper);
  integral += quad::integrate(integrand, breaks, opts).value;
  return scale * integral;
}

MonteCarloEstimate sigma_macro_montecarlo(const PowerLawCrossSection& pl, double v0,
                                          const GasState& gas, std::size_t samples,
                                          std::uint64_t seed, unsigned threads) {
  require_speed(v0, "sigma_macro_montecarlo: v0");
  if (samples < 1000) throw DomainError("sigma_macro_montecarlo: need at least 1000 samples");

  const double k = pl.prefactor_k();
  const double power = pl.exponent_alpha() + 1.0;
  const std::size_t n_blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<BlockMoments> blocks(n_blocks);

  auto run_block = [&](std::size_t b) {
    const std::size_t first = b * kMonteCarloBlock;
    const std::size_t last = std::min(samples, first + kMonteCarloBlock);
    BlockMoments m;
    for (std::size_t i = first; i < last; ++i) {
      const Vec3 u = mb_draw(gas, seed, i);
      const Vec3 rel = {-u[0], -u[1], v0 - u[2]};
      const double speed = std::sqrt(norm2(rel));
      // A draw landing exactly on v0 has probability zero; skip it.
      if (speed == 0.0) continue;
      const double value = k * std::pow(speed, power) / v0;
      ++m.count;
      const double delta = value - m.mean;
      m.mean += delta / static_cast<double>(m.count);
      m.m2 += delta * (value - m.mean);
    }
    blocks[b] = m;
  };

  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < n_blocks; b += workers) run_block(b);
      });
    }
  }

  BlockMoments total;
  for (const auto& b : blocks) total = merge(total, b);
  MonteCarloEstimate est;
  est.samples = total.count;
  est.mean = total.mean;
  if (total.count > 1) {
    const double variance = total.m2 / static_cast<double>(total.count - 1);
    est.std_error = std::sqrt(variance / static_cast<double>(total.count));
  }
  return est;
}

}  // namespace deco

#include "decokit/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "decokit/errors.hpp"

namespace deco::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Largest argument with Gamma(x) below DBL_MAX.
constexpr double kGammaMaxArg = 171.6243769563027;

constexpr double kIntegerTol = 1e-12;

std::string describe(double a, double b, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << a << ", b=" << b << ", z=" << z << ")";
  return os.str();
}

double gamma_lanczos(double x) {
  // x >= 0.5
  x -= 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    series += kLanczosCoeffs[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  // Split the power so t^(x+1/2) cannot overflow before the product does.
  const double half_power = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_power * std::exp(-t) * half_power * series;
}

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x) {
  const double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

// Gamma(num) / Gamma(den); falls back to log-gamma when either overflows.
double gamma_ratio(double num, double den) {
  if (num < 150.0 && den < 150.0) return gamma(num) / gamma(den);
  int sign_num = 1;
  int sign_den = 1;
  const double log_num = ::lgamma_r(num, &sign_num);
  const double log_den = ::lgamma_r(den, &sign_den);
  return sign_num * sign_den * std::exp(log_num - log_den);
}

// Exact polynomial M(-n, b; z) = sum_{k<=n} (-n)_k / (b)_k z^k / k!.
double kummer_polynomial(int n, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (static_cast<double>(k - n) / (b + k)) * (z / (k + 1));
    sum += term;
  }
  return sum;
}

double kummer_series(double a, double b, double z, const SpecfunConfig& cfg) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < cfg.max_series_terms; ++n) {
    const double ratio = (a + n) / (b + n) * z / (n + 1);
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(ratio) < 1.0 && std::abs(term) <= cfg.series_tolerance * std::abs(sum)) {
      return sum;
    }
  }
  throw ConvergenceError("kummer_m: power series did not converge within max_series_terms " +
                         describe(a, b, z));
}

struct AsymptoticSum {
  double value;
  double smallest_term;  // relative to |value|
};

// M(a, b; -w) for large w > 0, algebraic branch only. The exponentially
// small companion term is dropped.
AsymptoticSum kummer_negative_asymptotic(double a, double b, double w, const SpecfunConfig& cfg) {
  double term = 1.0;
  double sum = 1.0;
  double smallest = 1.0;
  for (int k = 0; k < cfg.max_series_terms; ++k) {
    const double next = term * (a + k) * (a - b + 1.0 + k) / ((k + 1) * w);
    if (next == 0.0) {
      smallest = 0.0;
      break;
    }
    if (std::abs(next) >= std::abs(term)) break;  // smallest term reached
    term = next;
    sum += term;
    smallest = std::abs(term / sum);
    if (smallest <= cfg.series_tolerance) break;
  }
  const double prefactor = gamma_ratio(b, b - a) * std::pow(w, -a);
  return {prefactor * sum, smallest};
}

// Accuracy promised by kummer_m; the asymptotic branch may stop above
// series_tolerance as long as it beats this.
constexpr double kAsymptoticAcceptance = 1e-11;

// Largest |z| for which exp(|z|) is finite.
constexpr double kExpLimit = 700.0;

double kummer_negative(double a, double b, double w, const SpecfunConfig& cfg) {
  const double c = b - a;
  if (is_nonpositive_integer(c)) {
    return std::exp(-w) * kummer_polynomial(-static_cast<int>(std::lround(c)), b, w);
  }
  if (w > cfg.asymptotic_switch) {
    const AsymptoticSum asym = kummer_negative_asymptotic(a, b, w, cfg);
    if (asym.smallest_term <= kAsymptoticAcceptance) return asym.value;
    if (w > kExpLimit) {
      throw ConvergenceError("kummer_m: asymptotic expansion stalled above tolerance " +
                             describe(a, b, -w));
    }
  }
  return std::exp(-w) * kummer_series(c, b, w, cfg);
}

}  // namespace

void SpecfunConfig::validate() const {
  if (!(series_tolerance > 0.0 && series_tolerance < 1e-6)) {
    throw DomainError("SpecfunConfig: series_tolerance must lie in (0, 1e-6)");
  }
  if (max_series_terms < 50) {
    throw DomainError("SpecfunConfig: max_series_terms must be at least 50");
  }
  if (!(asymptotic_switch > 0.0) || !std::isfinite(asymptotic_switch)) {
    throw DomainError("SpecfunConfig: asymptotic_switch must be positive");
  }
}

bool is_nonpositive_integer(double x) {
  const double r = std::round(x);
  return r <= 0.0 && std::abs(x - r) <= kIntegerTol;
}

double gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma: argument is not finite");
  if (x <= 0.0 && x == std::round(x)) {
    std::ostringstream os;
    os << "gamma: pole at x = " << x;
    throw PoleError(os.str());
  }
  if (x > kGammaMaxArg) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma: Gamma(" << x << ") exceeds the double range";
    throw OverflowError(os.str());
  }

  double result = 0.0;
  if (x < 0.5) {
    const double reflected = 1.0 - x;
    // Gamma(1 - x) overflows here while Gamma(x) itself underflows.
    if (reflected > kGammaMaxArg) return 0.0;
    result = std::numbers::pi / (sin_pi(x) * gamma_lanczos(reflected));
  } else {
    result = gamma_lanczos(x);
  }
  if (!std::isfinite(result)) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma: Gamma(" << x << ") exceeds the double range";
    throw OverflowError(os.str());
  }
  return result;
}

double kummer_m(double a, double b, double z, const SpecfunConfig& cfg) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
    throw DomainError("kummer_m: arguments must be finite " + describe(a, b, z));
  }
  if (is_nonpositive_integer(b)) {
    throw DomainError("kummer_m: b must not be a non-positive integer " + describe(a, b, z));
  }
  if (z == 0.0) return 1.0;

  if (is_nonpositive_integer(a)) {
    return kummer_polynomial(-static_cast<int>(std::lround(a)), b, z);
  }

  double result = 0.0;
  if (z < 0.0) {
    result = kummer_negative(a, b, -z, cfg);
  } else if (z <= cfg.asymptotic_switch) {
    result = kummer_series(a, b, z, cfg);
  } else {
    // Kummer's transformation moves the large argument to the negative side.
    result = std::exp(z) * kummer_m(b - a, b, -z, cfg);
  }
  if (!std::isfinite(result)) {
    throw OverflowError("kummer_m: result exceeds the double range " + describe(a, b, z));
  }
  return result;
}

double gr_integral_closed_form(double mu, double g, const SpecfunConfig& cfg) {
  if (!std::isfinite(mu) || !(mu > -0.5)) {
    throw DomainError("gr_integral_closed_form: requires mu > -1/2");
  }
  if (!std::isfinite(g) || g < 0.0) {
    throw DomainError("gr_integral_closed_form: requires finite g >= 0");
  }
  if (g == 0.0) return 0.0;
  const double quarter_g2 = 0.25 * g * g;
  const double value =
      0.5 * g * gamma(mu + 0.5) * std::exp(quarter_g2) * kummer_m(1.0 - mu, 1.5, -quarter_g2, cfg);
  if (!std::isfinite(value)) {
    throw OverflowError("gr_integral_closed_form: result exceeds the double range");
  }
  return value;
}

}  // namespace deco::specfun

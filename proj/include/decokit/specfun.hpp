#pragma once

// Real-argument special functions: Gamma, Kummer's confluent
// hypergeometric function M(a, b; z) = 1F1(a; b; z), and the closed form of
//
//   int_0^inf x^(2 mu - 1) exp(-x^2) sinh(g x) dx
//     = (g / 2) Gamma(mu + 1/2) exp(g^2 / 4) M(1 - mu, 3/2; -g^2 / 4),  mu > -1/2.
//
// Everything here is a pure function of its arguments.

namespace deco::specfun {

struct SpecfunConfig {
  double series_tolerance = 1e-14;
  int max_series_terms = 500;
  // |z| above which M(a, b; z) switches to its large-argument expansion.
  double asymptotic_switch = 30.0;

  // Throws DomainError when the invariants do not hold.
  void validate() const;
};

/// Gamma function. Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below 1/2.
/// Throws PoleError at 0, -1, -2, ... and OverflowError once the result
/// leaves the double range.
double gamma(double x);

/// Kummer's function M(a, b; z) for real arguments.
///
/// * a a non-positive integer (within 1e-12): exact terminating polynomial.
/// * z > 0: direct series up to the switch, exp(z) M(b - a, b; -z) above.
/// * z < 0, |z| <= switch: exp(z) M(b - a, b; |z|), a series whose terms
///   share one sign whenever b - a > 0.
/// * z < 0, |z| > switch: Gamma(b)/Gamma(b - a) |z|^(-a) sum_k
///   (a)_k (a - b + 1)_k / (k! |z|^k), truncated at the smallest term.
///
/// Throws DomainError if b is a non-positive integer or an argument is not
/// finite, ConvergenceError if the tolerance is missed within
/// max_series_terms.
double kummer_m(double a, double b, double z, const SpecfunConfig& cfg = {});

/// Right-hand side of the sinh-Gaussian moment identity above.
/// Throws DomainError for mu <= -1/2 or g < 0.
double gr_integral_closed_form(double mu, double g, const SpecfunConfig& cfg = {});

// True when x lies within 1e-12 of an integer n <= 0.
bool is_nonpositive_integer(double x);

}  // namespace deco::specfun

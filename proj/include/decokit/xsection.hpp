#pragma once

#include <cstdint>

#include "decokit/gas.hpp"
#include "decokit/specfun.hpp"

namespace deco {

/// Microscopic cross-section sigma(v) = K v^alpha.
///
/// alpha > -4 keeps the thermal average finite. For -4 < alpha <= -3 the
/// reduced velocity integral has a singular integrand at the origin; this
/// is reported by singular_endpoint().
class PowerLawCrossSection {
public:
  // Throws DomainError unless K > 0 and alpha > -4.
  PowerLawCrossSection(double prefactor_k, double exponent_alpha);

  double prefactor_k() const { return prefactor_k_; }
  double exponent_alpha() const { return exponent_alpha_; }
  bool singular_endpoint() const { return exponent_alpha_ <= -3.0; }

private:
  double prefactor_k_;
  double exponent_alpha_;
};

/// Test particle of mass M [kg] moving at speed v0 [m/s].
class BeamState {
public:
  // Throws DomainError unless both are positive.
  BeamState(double test_mass, double speed_v0);

  double test_mass() const { return test_mass_; }
  double speed_v0() const { return speed_v0_; }
  double momentum_p0() const { return test_mass_ * speed_v0_; }

private:
  double test_mass_;
  double speed_v0_;
};

/// Power law for an attractive -C6/r^6 potential: alpha = -2/5 and
///   K = (3 pi^6 / 8)^(2/5) / (sin(pi/5) Gamma(2/5)) * (C6 / hbar)^(2/5).
PowerLawCrossSection k_from_c6(double c6, const PhysicalConstants& constants = {});

/// K v_rel^alpha. At v_rel == 0 this is K for alpha == 0 and 0 for
/// alpha > 0; throws DomainError for v_rel < 0 or (v_rel == 0, alpha < 0).
double sigma_micro(const PowerLawCrossSection& pl, double v_rel);

/// Closed-form thermal average
///   K (2/sqrt(pi)) Gamma(alpha/2 + 2) v_mp^(alpha+1) / v0
///     * M(-(alpha/2 + 1/2), 3/2; -(v0/v_mp)^2).
double sigma_macro_exact(const PowerLawCrossSection& pl, double v0, double vmp,
                         const specfun::SpecfunConfig& cfg = {});

/// Coefficient c_n of x^(2n) in the small-x expansion of
/// M(-(alpha/2 + 1/2), 3/2; -x^2). c_0 = 1; for alpha = -2/5, c_1 = 1/5.
double series_coefficient(double alpha, int n);

/// sigma_macro_exact with M replaced by its Taylor polynomial through
/// x^(2 order). Throws DomainError unless 0 <= order <= 10.
double sigma_macro_series(const PowerLawCrossSection& pl, double v0, double vmp, int order);

/// Adaptive Gauss-Kronrod evaluation of the reduced one-dimensional
/// thermal integral
///   K (2/sqrt(pi)) v_mp^(alpha+2) / v0^2
///     * int_0^inf t^(alpha+2) exp(-x^2 - t^2) sinh(2 t x) dt,  x = v0 / v_mp,
/// with the exponentials combined as (1/2) exp(-(t-x)^2) (1 - exp(-4 t x)).
/// Throws ConvergenceError when the tolerance cannot be met.
double sigma_macro_quadrature(const PowerLawCrossSection& pl, double v0, double vmp,
                              double abs_tol, double rel_tol);

struct MonteCarloEstimate {
  double mean = 0.0;       // m^2
  double std_error = 0.0;  // m^2
  std::size_t samples = 0;
};

/// Sample mean of K |v0 - u|^(alpha+1) / v0 over Maxwell-Boltzmann draws u,
/// with v0 along +z. Draws are processed in fixed blocks of sample indices
/// and merged in order, so the result does not depend on `threads`.
/// Throws DomainError for samples < 1000.
MonteCarloEstimate sigma_macro_montecarlo(const PowerLawCrossSection& pl, double v0,
                                          const GasState& gas, std::size_t samples,
                                          std::uint64_t seed, unsigned threads = 0);

}  // namespace deco

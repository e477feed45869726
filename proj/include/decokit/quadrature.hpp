#pragma once

#include <functional>
#include <span>

namespace deco::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // Kronrod-minus-Gauss estimate summed over panels
  int panels = 0;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_panels = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [lo, hi].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|). Abscissae never
/// touch the endpoints, so integrable endpoint singularities are allowed.
/// Throws ConvergenceError when max_panels is reached first.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadOptions& opts = {});

/// Same, starting from the panels delimited by `breakpoints` (sorted,
/// first and last are the integration limits).
QuadResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                     const QuadOptions& opts = {});

}  // namespace deco::quad

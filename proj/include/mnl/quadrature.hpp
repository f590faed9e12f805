#pragma once

// One-dimensional quadrature and search primitives shared by the integral
// means, the mixed norms and the estimate checks.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace mnl {

/// Raised when a quadrature or search exhausts its evaluation budget before
/// reaching the requested tolerance.
class ToleranceNotReached : public std::runtime_error {
 public:
  explicit ToleranceNotReached(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
  bool converged = false;
};

using RealFunction = std::function<double(double)>;

/// Single 15-point Gauss-Kronrod panel on [a, b]; error = |K15 - G7|.
QuadratureResult gauss_kronrod15(const RealFunction& f, double a, double b);

/// Globally adaptive Gauss-Kronrod integration over consecutive panels
/// [breaks[i], breaks[i+1]]. Bisects the panel with the largest error estimate
/// until the total error is below max(abs_tol, rel_tol * |value|) or
/// max_panels is reached (converged == false in that case).
QuadratureResult integrate_adaptive(const RealFunction& f, std::span<const double> breaks, double rel_tol,
                                    double abs_tol = 0.0, std::size_t max_panels = 4000);

struct SearchResult {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for a local maximum of a unimodal f on [a, b];
/// stops when the bracket is shorter than x_tol.
SearchResult maximize_golden(const RealFunction& f, double a, double b, double x_tol);

}  // namespace mnl

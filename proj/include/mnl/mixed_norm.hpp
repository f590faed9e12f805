#pragma once

// Mixed (quasi)norms
//   ||f||_{p,q,alpha}^q = alpha q int_0^1 (1-r)^(alpha q - 1) M_p(r,f)^q dr   (q < inf)
//   ||f||_{p,inf,alpha} = sup_r (1-r)^alpha M_p(r,f)
// together with divergence classification by the growth exponent of M_p.

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "mnl/function_model.hpp"
#include "mnl/integral_means.hpp"
#include "mnl/space_params.hpp"
#include "mnl/special_functions.hpp"

namespace mnl {

/// Margin by which the fitted growth exponent must exceed alpha before a norm
/// is declared divergent, and the largest fit residual that counts as a power law.
inline constexpr double kDivergenceMargin = 0.02;
inline constexpr double kMaxFitResidual = 0.01;
/// Dyadic tail contributions must shrink by at least this factor per block of
/// four panels before a norm is reported finite.
inline constexpr double kTailDecayRatio = 0.9;

struct NormResult {
  enum class Kind { Finite, Divergent, Inconclusive };

  Kind kind = Kind::Inconclusive;
  double value = 0.0;  // the norm (Finite) or the partial integral (Inconclusive)
  double error = 0.0;  // absolute error bound (Finite)
  double gamma_hat = 0.0;
  double fit_residual = 0.0;
  std::string note;

  static NormResult finite(double value, double error) { return {Kind::Finite, value, error, 0.0, 0.0, {}}; }
  static NormResult divergent(double gamma_hat, double residual, std::string note = {}) {
    return {Kind::Divergent, 0.0, 0.0, gamma_hat, residual, std::move(note)};
  }
  static NormResult inconclusive(double partial, double gamma_hat, double residual, std::string note = {}) {
    return {Kind::Inconclusive, partial, 0.0, gamma_hat, residual, std::move(note)};
  }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_divergent() const { return kind == Kind::Divergent; }
  bool is_inconclusive() const { return kind == Kind::Inconclusive; }

  nlohmann::json to_json() const;
};

std::string to_string(NormResult::Kind kind);

/// Least-squares fit of log M_p(1 - 2^-k, f) against k log 2.
struct GrowthFit {
  double gamma_hat = 0.0;
  double residual = 0.0;  // RMS residual of the fit, in natural-log units
  std::vector<int> levels;
  std::vector<double> log_means;
};

/// Fit over k = 8..24; lacunary series use k = 8..40, with means beyond the
/// angle budget taken from closed forms or scaled from M_2.
GrowthFit growth_fit(const AnalyticFunction& f, double p, double tol = 1e-6);
double growth_exponent(const AnalyticFunction& f, const PositiveExtended& p);

/// ||f||_{p,q,alpha}. Finite carries error <= tol * value.
/// Throws ToleranceNotReached if the panel budget runs out while the tail is
/// still shrinking.
NormResult mixed_norm(const AnalyticFunction& f, const SpaceParams& s, double tol = kDefaultTolerance);

/// Constant m of the pointwise bound |f(z)| <= m ||f|| (1-|z|)^-(alpha + 1/p):
/// 2^(1/p) / (alpha q B(alpha q, q/p + 1))^(1/q) for q < inf, 1 for p = inf.
/// For q = inf and p < inf it is the q -> inf limit
/// 2^(1/p) (alpha + 1/p)^(alpha + 1/p) / (alpha^alpha (1/p)^(1/p)).
double point_evaluation_constant(const SpaceParams& s);

/// m / (1 - |z|)^(alpha + 1/p), bounding the norm of f -> f(z).
double point_evaluation_bound(const SpaceParams& s, std::complex<double> z);

}  // namespace mnl

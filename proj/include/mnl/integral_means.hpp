#pragma once

// Integral means M_p(r, f) = ( (1/2pi) int_0^{2pi} |f(r e^{i theta})|^p dtheta )^(1/p),
// with M_inf(r, f) the maximum modulus on the circle of radius r.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnl/function_model.hpp"
#include "mnl/rational.hpp"

namespace mnl {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr std::size_t kMaxAngles = std::size_t{1} << 20;

/// log M_p at radius r = 1 - t, for p in (0, inf] given as a double (inf allowed).
/// Working in t and in log space keeps radii like 1 - 2^-200 and means like
/// 1e400 representable. Relative accuracy of M_p is tol.
/// Throws ToleranceNotReached when the angle budget is exhausted.
double log_integral_mean(const AnalyticFunction& f, double p, double t, double tol = kDefaultTolerance);

/// M_p(r, f) with relative error <= tol. Requires 0 < r < 1 and tol > 0.
double integral_mean(const AnalyticFunction& f, const PositiveExtended& p, double r, double tol = kDefaultTolerance);

/// M_2(r, f) from sum |c_n|^2 r^(2n), truncated once the tail bound drops
/// below 1e-12 of the partial sum. Throws UnsupportedFamily for LogPower.
double parseval_mean(const AnalyticFunction& f, double r);

/// log M_p at r = 1 - t for a Lacunary series in closed form, when one exists:
/// p = 2 (Parseval), p = 4 (the squares of distinct powers of two and their
/// pairwise sums are all distinct, so M_4^4 = 2 S_2^2 - S_4 with
/// S_k = sum |a_n r^(2^(n-1))|^k), and p = inf when every coefficient has the
/// same argument (the maximum is attained on the ray through that phase).
/// Returns nullopt otherwise.
std::optional<double> lacunary_log_mean_exact(const AnalyticFunction& f, double p, double t);

struct MeanProfile {
  PositiveExtended p;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> error_bounds;
  std::vector<bool> failed;

  /// Header "r,value,error"; failed samples print nan.
  std::string to_csv() const;
};

/// integral_mean at each radius; a sample whose quadrature fails falls back to
/// lacunary_log_mean_exact when it applies and is otherwise marked failed
/// instead of aborting the profile. Radii must increase strictly in (0, 1).
MeanProfile mean_profile(const AnalyticFunction& f, const PositiveExtended& p, std::span<const double> radii,
                         double tol = kDefaultTolerance);

}  // namespace mnl

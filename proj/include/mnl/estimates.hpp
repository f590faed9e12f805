#pragma once

// Numerical checks of the growth estimates for H(p, q, alpha): decay of
// weighted means, the Beta identity, pointwise and point-evaluation bounds,
// the extremal kernels, and the integral-mean comparisons used for inclusions.

#include <string>
#include <vector>

#include "json.hpp"

#include "mnl/function_model.hpp"
#include "mnl/mixed_norm.hpp"
#include "mnl/space_params.hpp"

namespace mnl {

struct CheckReport {
  std::string name;
  std::string instance;  // function and parameters, e.g. "power:1 in 1,2,1"
  std::string grid;      // sample grid description
  /// Signed relative violation: <= 0 means every sample satisfied the inequality.
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// The inequality is known to fail for this instance; a failing run is the
  /// documented outcome.
  bool expected_fail = false;
  nlohmann::json metadata = nlohmann::json::object();

  /// Outcome differs from the documented one.
  bool unexpected() const { return pass == expected_fail; }
  nlohmann::json to_json() const;
};

/// Tolerance for norms and means inside the checks; inequality slack is 1 + 4 tol.
inline constexpr double kCheckTolerance = 1e-7;

/// r_k = 1 - 2^-k for k in [first, last].
std::vector<double> dyadic_radii(int first, int last);

/// (1 - r)^alpha M_p(r, f) along r_seq is eventually decreasing and ends below
/// half its first value. Requires q < inf and f a member of s.
CheckReport check_little_oh_mean(const AnalyticFunction& f, const SpaceParams& s, const std::vector<double>& r_seq,
                                 double tol = kCheckTolerance);

/// int_{|z|}^1 (1-rho)^(aq-1) (rho-|z|)^(q/p) drho against B(aq, q/p+1)(1-|z|)^(aq+q/p), relative 1e-8.
CheckReport check_beta_identity(double alpha_q, double q_over_p, double z_mod);

/// |f(z)| <= m ||f|| (1-|z|)^-(alpha+1/p) on radial and angular grids, plus
/// decay of |f(z)| (1-|z|)^(alpha+1/p) along the radial grid.
CheckReport check_pointwise_bound(const AnalyticFunction& f, const SpaceParams& s, double tol = kCheckTolerance);

/// Norms N(z) and normalized values G(z) of the kernels
/// (1-|z|^2)^s_exp / (1 - conj(z) w)^(alpha+1/p+s_exp) stay within a factor 20
/// across z_mods, and G(z) <= m N(z).
CheckReport check_extremal_kernel(const SpaceParams& s, const Rational& s_exp, const std::vector<double>& z_mods,
                                  double tol = kCheckTolerance);

/// M_p^v <= ||f||^(v-q) (1-r)^(-alpha(v-q)) M_p^q for q <= v < inf.
CheckReport check_lemma_D(const AnalyticFunction& f, const SpaceParams& s, const Rational& v,
                          const std::vector<double>& r_grid, double tol = kCheckTolerance);

/// M_u <= m^(1-p/u) ||f|| (1-r)^(-alpha+1/u-1/p) for p < u, q < inf.
CheckReport check_lemma_E(const AnalyticFunction& f, const SpaceParams& s, const PositiveExtended& u,
                          const std::vector<double>& r_grid, double tol = kCheckTolerance);

/// R(r) = M_u (1-r)^(1/p-1/u) / M_p does not exceed twice its median over the
/// grid at any of the last ten radii. The empirical constant max R is recorded.
CheckReport check_lemma_F(const AnalyticFunction& f, const PositiveExtended& p, const PositiveExtended& u,
                          const std::vector<double>& r_grid, double tol = kCheckTolerance);

/// |f(r e^{i theta})| (rho - r)^(1/p) <= 2^(1/p) M_p(rho, f) for r < rho, p < inf.
CheckReport check_subharmonic_bound(const AnalyticFunction& f, const PositiveExtended& p,
                                    double tol = kCheckTolerance);

/// Ten functions of bounded or mildly singular growth used by the suite and
/// by the embedding cross-checks.
std::vector<AnalyticFunction> standard_battery();

/// Every check over the standard battery, sorted by name then instance. Names
/// are matched against `glob` ('*' and '?' wildcards).
std::vector<CheckReport> run_checks(const std::string& glob, const std::vector<AnalyticFunction>& battery);

/// Names of the checks run_checks knows.
std::vector<std::string> check_names();

bool glob_match(const std::string& pattern, const std::string& text);

/// Fixed-width table with one row per report.
std::string format_table(const std::vector<CheckReport>& reports);

}  // namespace mnl

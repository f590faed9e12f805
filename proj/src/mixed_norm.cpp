#include "mnl/mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mnl/format.hpp"
#include "mnl/quadrature.hpp"

namespace mnl {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// Deepest radius 1 - t at which a mean is evaluated. Lacunary means need about
// 100 / t angles, so the 2^20 angle budget caps direct evaluation near
// t = 2^-12; below that M_2 comes from the coefficients and M_p is M_2 times
// the ratio M_p / M_2 observed at 2^-12. The 62-term budget ends at 2^-52.
constexpr double kMinT = 1e-290;
constexpr int kLacunaryDeepestLevel = 12;
// Lacunary means ripple on every dyadic scale; fitting to 2^-40 averages it out.
constexpr int kLacunaryFitLevel = 40;
constexpr double kLooseMeanTolerance = 1e-5;
// Smallest power-law decay of panel contributions accepted as summable.
constexpr double kMinTailPower = 1.15;
constexpr int kLacunaryScaledLevel = 52;
constexpr int kMaxPanels = 1000;
constexpr int kBlock = 4;

bool is_lacunary(const AnalyticFunction& f) { return f.as<Lacunary>() != nullptr; }

double min_t(const AnalyticFunction& f) { return is_lacunary(f) ? std::ldexp(1.0, -kLacunaryScaledLevel) : kMinT; }

// log M_p at r = 1 - t. Lacunary series use the closed forms where they exist;
// otherwise they are evaluated directly down to the deepest dyadic level (at
// most 2^-12) the angle budget allows, and scaled from M_2 below it.
class MeanSource {
 public:
  MeanSource(const AnalyticFunction& f, double p, double tol) : f_(f), p_(p), tol_(tol) {}

  double operator()(double t) {
    if (!is_lacunary(f_)) return log_integral_mean(f_, p_, t, tol_);
    if (const auto exact = lacunary_log_mean_exact(f_, p_, t)) return *exact;
    calibrate();
    if (t >= t_direct_) {
      try {
        return log_integral_mean(f_, p_, t, tol_);
      } catch (const ToleranceNotReached&) {
      }
      // |f|^p has a cusp where a zero of f lies close to the circle; the
      // trapezoid rule converges slowly there, so settle for a looser mean.
      // Later radii use the looser tolerance directly; error bounds account for it.
      if (tol_ < kLooseMeanTolerance) {
        try {
          const double v = log_integral_mean(f_, p_, t, kLooseMeanTolerance);
          tol_ = kLooseMeanTolerance;
          loosened_ = true;
          return v;
        } catch (const ToleranceNotReached&) {
        }
      }
      t_direct_ = std::nextafter(t, 1.0);  // the angle budget is exhausted at and below t
    }
    scaled_ = true;
    return *lacunary_log_mean_exact(f_, 2.0, t) + offset_;
  }

  /// Describes the approximations used so far, empty if none.
  /// Relative accuracy of the means returned so far.
  double mean_tolerance() const { return tol_; }

  std::string note() const {
    std::string out;
    if (scaled_) out = "lacunary means below r = 1 - " + format_double(t_direct_) + " scaled from M_2";
    if (loosened_) {
      out += std::string(out.empty() ? "" : "; ") + "lacunary means computed to relative accuracy " +
             format_double(kLooseMeanTolerance) + " near zeros of f";
    }
    return out;
  }

 private:
  void calibrate() {
    if (calibrated_) return;
    for (int level = kLacunaryDeepestLevel; level >= 4; --level) {
      const double t = std::ldexp(1.0, -level);
      try {
        offset_ = log_integral_mean(f_, p_, t, tol_) - *lacunary_log_mean_exact(f_, 2.0, t);
        t_direct_ = t;
        calibrated_ = true;
        return;
      } catch (const ToleranceNotReached&) {
      }
    }
    throw ToleranceNotReached("lacunary mean does not converge even at r = 1 - 2^-4");
  }

  const AnalyticFunction& f_;
  double p_;
  double tol_;
  bool calibrated_ = false;
  bool scaled_ = false;
  bool loosened_ = false;
  double t_direct_ = 1.0;
  double offset_ = 0.0;
};

// Second-level extrapolation for contributions that decay like a power of
// the panel index: sums over the panel groups [2^j - 1, 2^(j+1) - 2] then
// shrink geometrically. Returns false when the group ratio does not qualify.
bool group_tail(const std::vector<double>& c, double& value, double& error) {
  std::vector<double> groups;
  for (std::size_t start = 0, len = 1; start + len <= c.size(); start += len, len *= 2) {
    double g = 0.0;
    for (std::size_t i = start; i < start + len; ++i) g += c[i];
    groups.push_back(g);
  }
  const std::size_t n = groups.size();
  if (n < 5 || groups[n - 2] <= 0.0 || groups[n - 3] <= 0.0) return false;
  const double rho = groups[n - 1] / groups[n - 2];
  const double rho_prev = groups[n - 2] / groups[n - 3];
  if (!(rho < kTailDecayRatio)) return false;
  // Early panels can mimic a fast decay; the panels of the second half must
  // themselves decay like k^-s with s clearly above 1.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::size_t k = c.size() / 2; k < c.size(); ++k) {
    if (!(c[k] > 0.0)) return false;
    const double x = std::log(static_cast<double>(k + 1));
    const double y = std::log(c[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1.0;
  }
  const double decay = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (!(decay >= kMinTailPower)) return false;
  std::size_t covered = (std::size_t{1} << n) - 1;
  double partial = 0.0;  // panels past the last complete group
  for (std::size_t i = covered; i < c.size(); ++i) partial += c[i];
  double complete = 0.0;
  for (double g : groups) complete += g;
  const double tail = groups[n - 1] * rho / (1.0 - rho);
  value = complete + std::max(tail, partial);
  error = groups[n - 1] * std::abs(rho - rho_prev) / ((1.0 - rho) * (1.0 - rho));
  return true;
}

double mean_tol(double q, double tol) { return std::max(1e-13, tol / (4.0 * std::max(1.0, q))); }

// Geometric extrapolation of a sequence of positive panel contributions.
struct TailEstimate {
  double block_ratio = std::numeric_limits<double>::quiet_NaN();
  double tail = 0.0;
  double error = std::numeric_limits<double>::infinity();
};

double block_sum(const std::vector<double>& c, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = end + 1 - kBlock; i <= end; ++i) s += c[i];
  return s;
}

TailEstimate estimate_tail(const std::vector<double>& c) {
  TailEstimate out;
  const std::size_t k = c.size() - 1;
  if (c.size() < 2 * kBlock) return out;
  const double recent = block_sum(c, k);
  const double earlier = block_sum(c, k - kBlock);
  if (earlier <= 0.0) {
    out.block_ratio = recent <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (recent <= 0.0) out.error = 0.0;
    return out;
  }
  out.block_ratio = recent / earlier;
  if (!(out.block_ratio < 1.0)) return out;
  const double rho = std::pow(out.block_ratio, 1.0 / kBlock);
  out.tail = c[k] * rho / (1.0 - rho);
  // Drift of the per-panel ratio over the last block bounds the extrapolation error.
  double drift = rho;
  if (c.size() >= 3 * kBlock) {
    const double older = block_sum(c, k - 2 * kBlock);
    drift = older > 0.0 ? std::abs(rho - std::pow(earlier / older, 1.0 / kBlock)) : rho;
  }
  out.error = c[k] * drift / ((1.0 - rho) * (1.0 - rho));
  return out;
}

NormResult classify_unfinished(const AnalyticFunction& f, const SpaceParams& s, double partial, bool flat,
                               bool growing, double tol) {
  const GrowthFit fit = growth_fit(f, s.p.to_double(), std::max(tol, 1e-8));
  const double alpha = s.alpha.to_double();
  if (fit.gamma_hat > alpha + kDivergenceMargin && fit.residual < kMaxFitResidual) {
    return NormResult::divergent(fit.gamma_hat, fit.residual, "mean growth exponent exceeds alpha");
  }
  if ((flat || growing) && fit.gamma_hat >= alpha - kDivergenceMargin) {
    return NormResult::divergent(fit.gamma_hat, fit.residual,
                                 growing ? "dyadic contributions increase" : "dyadic contributions stopped decaying");
  }
  return NormResult::inconclusive(partial, fit.gamma_hat, fit.residual, "tail neither decays nor grows decisively");
}

NormResult mixed_norm_finite_q(const AnalyticFunction& f, const SpaceParams& s, double tol) {
  const double q = s.q.to_double();
  const double p = s.p.to_double();
  const double aq = s.alpha.to_double() * q;
  const double t_floor = min_t(f);
  const double m_tol = mean_tol(q, tol);
  // alpha q < 1: substitute u = t^(alpha q), which absorbs the weight exactly;
  // lacunary series keep dyadic panels in t because their radius floor is shallow.
  const bool substitute = aq < 1.0 && !is_lacunary(f);
  const bool bounded = growth_order(f) == 0.0 && !is_lacunary(f) && f.as<LogPower>() == nullptr;

  MeanSource source(f, p, m_tol);
  auto log_mean_at = [&](double t) { return source(std::max(t, bounded ? kMinT : t_floor)); };
  std::function<double(double)> integrand;
  if (substitute) {
    integrand = [&](double u) { return std::exp(q * log_mean_at(std::pow(u, 1.0 / aq))); };
  } else {
    integrand = [&](double t) { return aq * std::exp((aq - 1.0) * std::log(t) + q * log_mean_at(t)); };
  }

  int deepest = kMaxPanels;
  if (!bounded) {
    const double levels = -std::log2(t_floor);
    deepest = std::min(kMaxPanels, static_cast<int>(substitute ? levels * aq : levels) - 1);
  }

  auto finite_with = [&](double value, double err, const char* why) {
    const double norm = std::pow(value, 1.0 / q);
    NormResult r = NormResult::finite(norm, err / (q * value) * norm);
    if (source.mean_tolerance() > m_tol) r.error += source.mean_tolerance() * norm;
    std::string note;
    if (err > tol * value) note = why;
    const std::string approx = source.note();
    if (!approx.empty()) note += (note.empty() ? "" : "; ") + approx;
    r.note = note;
    return r;
  };
  std::vector<double> contributions;
  double total = 0.0;
  double quad_error = 0.0;
  bool flat = false;
  bool growing = false;
  TailEstimate tail;
  for (int k = 0; k <= deepest; ++k) {
    const double hi = std::ldexp(1.0, -k);
    const double breaks[] = {0.5 * hi, hi};
    const auto panel = integrate_adaptive(integrand, breaks, 0.25 * tol, 0.0, 64);
    if (!std::isfinite(panel.value)) {
      growing = true;
      break;
    }
    contributions.push_back(panel.value);
    total += panel.value;
    quad_error += panel.error;
    tail = estimate_tail(contributions);
    if (k < 2 * kBlock - 1) continue;
    const double value = total + tail.tail;
    if (tail.block_ratio < kTailDecayRatio && quad_error + tail.error <= tol * value) {
      return finite_with(value, quad_error + tail.error, "");
    }
    if (total == 0.0 && k >= 2 * kBlock) return NormResult::finite(0.0, 0.0);
    if (k >= 24 && tail.block_ratio > 1.0 + 1e-3) {
      growing = true;
      break;
    }
    if (k >= 32 && tail.block_ratio >= 1.0 - 1e-3) {
      flat = true;
      break;
    }
  }
  if (!flat && !growing && tail.block_ratio < kTailDecayRatio) {
    // The lacunary radius floor, not the panel budget, stopped the sum; report
    // the extrapolated value with the error actually achieved.
    if (is_lacunary(f)) {
      // Geometric and power-law extrapolations are cross-checked; their
      // disagreement bounds the error when both apply.
      double value = total + tail.tail;
      double err = tail.error;
      double group_value = 0.0;
      double group_err = 0.0;
      if (group_tail(contributions, group_value, group_err)) {
        err = std::max({err, group_err, std::abs(group_value - value)});
        value = group_value;
      }
      return finite_with(value, quad_error + err, "radius floor reached before the requested tolerance");
    }
    throw ToleranceNotReached("mixed norm tail still shrinking when the panel budget ran out");
  }
  if (!flat && !growing) {
    double value = 0.0;
    double err = 0.0;
    if (group_tail(contributions, value, err)) {
      return finite_with(value, quad_error + err, "power-law tail extrapolated above the requested tolerance");
    }
  }
  return classify_unfinished(f, s, std::pow(total, 1.0 / q), flat, growing, tol);
}

NormResult mixed_norm_infinite_q(const AnalyticFunction& f, const SpaceParams& s, double tol) {
  const double p = s.p.to_double();
  const double alpha = s.alpha.to_double();
  const double m_tol = mean_tol(1.0, tol);
  const double t_floor = min_t(f);
  // log of (1-r)^alpha M_p(r) at r = 1 - t
  MeanSource source(f, p, m_tol);
  auto log_weighted = [&](double t) { return alpha * std::log(t) + source(t); };
  auto finite = [&](double v, double err) {
    NormResult r = NormResult::finite(v, err);
    if (source.mean_tolerance() > m_tol) r.error += source.mean_tolerance() * v;
    r.note = source.note();
    return r;
  };

  std::vector<double> ts;
  std::vector<double> w;
  const int deepest = static_cast<int>(4.0 * -std::log2(t_floor));
  int k = 0;
  for (; k <= std::min(96, deepest); ++k) {
    ts.push_back(std::exp2(-k / 4.0));
    w.push_back(log_weighted(ts.back()));
  }
  auto argmax = [&] { return static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin()); };
  std::size_t best = argmax();
  if (best + 1 < w.size()) {
    // Interior maximum: refine in log t between the neighbouring grid points.
    const double lo = std::log(ts[best + 1]);
    const double hi = std::log(ts[best == 0 ? 0 : best - 1]);
    const auto found = maximize_golden([&](double lt) { return log_weighted(std::exp(lt)); }, lo, hi,
                                       (hi - lo) * std::sqrt(tol) * 0.1);
    const double v = std::exp(std::max(found.value, w[best]));
    return finite(v, tol * v);
  }

  // Supremum approached as r -> 1: extend the grid while the increments shrink
  // geometrically, then extrapolate the remaining increase.
  while (true) {
    const std::size_t n = w.size();
    if (n >= 9) {
      std::vector<double> inc;
      for (std::size_t i = n - 8; i < n; ++i) inc.push_back(std::exp(w[i]) - std::exp(w[i - 1]));
      if (std::all_of(inc.begin(), inc.end(), [](double d) { return d >= 0.0; }) && inc[3] > 0.0) {
        const double rho_recent = std::pow(inc[7] / inc[3], 0.25);
        const double rho_older = inc[0] > 0.0 ? std::pow(inc[3] / inc[0], 1.0 / 3.0) : rho_recent;
        if (rho_recent < 1.0) {
          const double tail = inc[7] * rho_recent / (1.0 - rho_recent);
          const double err = inc[7] * std::abs(rho_recent - rho_older) / ((1.0 - rho_recent) * (1.0 - rho_recent)) +
                             tol * std::exp(w.back());
          const double v = std::exp(w.back()) + tail;
          if (err <= tol * v) return finite(v, err);
        }
      } else if (std::all_of(inc.begin(), inc.end(), [](double d) { return d <= 0.0; })) {
        const double v = std::exp(*std::max_element(w.begin(), w.end()));
        return finite(v, tol * v);
      }
    }
    if (k > deepest || k > 4 * 1000) break;
    const GrowthFit fit = k == 97 ? growth_fit(f, p, std::max(tol, 1e-8)) : GrowthFit{};
    if (k == 97 && fit.gamma_hat > alpha + kDivergenceMargin && fit.residual < kMaxFitResidual) {
      return NormResult::divergent(fit.gamma_hat, fit.residual, "mean growth exponent exceeds alpha");
    }
    ts.push_back(std::exp2(-k / 4.0));
    w.push_back(log_weighted(ts.back()));
    ++k;
  }
  const GrowthFit fit = growth_fit(f, p, std::max(tol, 1e-8));
  if (fit.gamma_hat > alpha + kDivergenceMargin && fit.residual < kMaxFitResidual) {
    return NormResult::divergent(fit.gamma_hat, fit.residual, "mean growth exponent exceeds alpha");
  }
  return NormResult::inconclusive(std::exp(*std::max_element(w.begin(), w.end())), fit.gamma_hat, fit.residual,
                                  "weighted mean still increasing at the deepest radius");
}

}  // namespace

std::string to_string(NormResult::Kind kind) {
  switch (kind) {
    case NormResult::Kind::Finite: return "finite";
    case NormResult::Kind::Divergent: return "divergent";
    case NormResult::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json NormResult::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  switch (kind) {
    case Kind::Finite:
      j["value"] = value;
      j["error"] = error;
      break;
    case Kind::Divergent:
      j["gamma_hat"] = gamma_hat;
      j["fit_residual"] = fit_residual;
      break;
    case Kind::Inconclusive:
      j["partial"] = value;
      j["gamma_hat"] = gamma_hat;
      j["fit_residual"] = fit_residual;
      break;
  }
  if (!note.empty()) j["note"] = note;
  return j;
}

GrowthFit growth_fit(const AnalyticFunction& f, double p, double tol) {
  const bool lac = is_lacunary(f);
  const int first = 8;
  const int last = lac ? kLacunaryFitLevel : 24;
  MeanSource source(f, p, tol);
  GrowthFit fit;
  for (int k = first; k <= last; ++k) {
    fit.levels.push_back(k);
    fit.log_means.push_back(source(std::ldexp(1.0, -k)));
  }
  const double n = static_cast<double>(fit.levels.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < fit.levels.size(); ++i) {
    const double x = fit.levels[i] * kLn2;
    const double y = fit.log_means[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  if (!std::isfinite(sy)) {
    // f vanishes identically on the sampled circles.
    fit.gamma_hat = -std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.gamma_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - fit.gamma_hat * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < fit.levels.size(); ++i) {
    const double r = fit.log_means[i] - (intercept + fit.gamma_hat * fit.levels[i] * kLn2);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

double growth_exponent(const AnalyticFunction& f, const PositiveExtended& p) {
  return growth_fit(f, p.to_double()).gamma_hat;
}

NormResult mixed_norm(const AnalyticFunction& f, const SpaceParams& s, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  if (f.scale() == Complex(0.0)) return NormResult::finite(0.0, 0.0);
  return s.q.is_infinite() ? mixed_norm_infinite_q(f, s, tol) : mixed_norm_finite_q(f, s, tol);
}

double point_evaluation_constant(const SpaceParams& s) {
  if (s.p.is_infinite()) return 1.0;
  const double inv_p = s.p.reciprocal().to_double();
  const double alpha = s.alpha.to_double();
  if (s.q.is_infinite()) {
    const double c = alpha + inv_p;
    return std::exp(inv_p * std::numbers::ln2 + c * std::log(c) - alpha * std::log(alpha) - inv_p * std::log(inv_p));
  }
  const double q = s.q.to_double();
  const double aq = alpha * q;
  return std::exp(inv_p * std::numbers::ln2 - (std::log(aq) + log_beta(aq, q * inv_p + 1.0)) / q);
}

double point_evaluation_bound(const SpaceParams& s, std::complex<double> z) {
  const double modulus = std::abs(z);
  if (!(modulus < 1.0)) throw std::domain_error("point evaluation requires |z| < 1");
  return point_evaluation_constant(s) * std::pow(1.0 - modulus, -s.critical_order().to_double());
}

}  // namespace mnl

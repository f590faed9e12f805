#include "mnl/integral_means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "mnl/format.hpp"
#include "mnl/parallel.hpp"
#include "mnl/quadrature.hpp"

namespace mnl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Log-modulus sampler on the circle of radius 1 - t. Lacunary series are
// summed with exact root-of-unity phases on the grid 2 pi j / N, so degrees up
// to 2^61 do not lose their phase to rounding of m * theta.
class CircleSampler {
 public:
  CircleSampler(const AnalyticFunction& f, double t) : f_(f), t_(t) {
    if (f.as<Lacunary>()) {
      expansion_ = lacunary_expansion(f, t, 1e-15);
      for (const auto& term : expansion_->terms) {
        weights_.push_back(term.coefficient * std::exp(term.log_radius_power));
        max_degree_ = std::max<std::size_t>(max_degree_, term.degree);
      }
    } else if (const auto* s = f.as<Series>()) {
      max_degree_ = s->coefficients.empty() ? 0 : s->coefficients.size() - 1;
    } else if (const auto* m = f.as<Monomial>()) {
      max_degree_ = m->k;
    } else if (const auto* p = f.as<Power>()) {
      if (p->gamma.is_integer() && p->gamma.sign() <= 0) max_degree_ = static_cast<std::size_t>(-p->gamma.num());
    }
  }

  std::size_t max_degree() const { return max_degree_; }

  double on_grid(std::size_t j, std::size_t n) {
    if (!expansion_) return log_modulus(f_, t_, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
    if (roots_.size() != n) {
      roots_.resize(n);
      for (std::size_t k = 0; k < n; ++k) roots_[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const std::uint64_t m = expansion_->terms[i].degree % n;
      acc += weights_[i] * roots_[(m * j) % n];
    }
    return acc == Complex(0.0) ? kNegInf : std::log(std::abs(acc));
  }

  double at(double theta) const {
    if (!expansion_) return log_modulus(f_, t_, theta);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double m = static_cast<double>(expansion_->terms[i].degree);
      acc += weights_[i] * std::polar(1.0, std::fmod(m * theta, 2.0 * kPi));
    }
    return acc == Complex(0.0) ? kNegInf : std::log(std::abs(acc));
  }

 private:
  const AnalyticFunction& f_;
  double t_;
  std::optional<LacunaryExpansion> expansion_;
  std::vector<Complex> weights_;
  std::vector<Complex> roots_;
  std::size_t max_degree_ = 0;
};

double quadrature_rel_tol(double p, double tol) { return std::clamp(0.5 * p * tol, 1e-14, 1e-3); }

// Periodic trapezoid rule with node doubling.
double log_mean_trapezoid(CircleSampler& sampler, double p, double tol) {
  std::size_t n = next_pow2(std::max<std::size_t>(64, 4 * std::max<std::size_t>(sampler.max_degree(), 1)));
  if (n > kMaxAngles) throw ToleranceNotReached("integral mean needs more than 2^20 angles");
  std::vector<double> logs(n);
  for (std::size_t j = 0; j < n; ++j) logs[j] = sampler.on_grid(j, n);
  const double shift = *std::max_element(logs.begin(), logs.end());
  if (shift == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double l : logs) sum += std::exp(p * (l - shift));
  double previous = sum / static_cast<double>(n);
  const double rel = quadrature_rel_tol(p, tol);
  while (2 * n <= kMaxAngles) {
    const std::size_t n2 = 2 * n;
    for (std::size_t j = 1; j < n2; j += 2) sum += std::exp(p * (sampler.on_grid(j, n2) - shift));
    n = n2;
    const double current = sum / static_cast<double>(n);
    if (std::abs(current - previous) <= 0.5 * rel * current) return shift + std::log(current) / p;
    previous = current;
  }
  throw ToleranceNotReached("integral mean did not converge within 2^20 angles");
}

// Graded adaptive rule for moduli peaked at one angle. Peaked families in
// scope have real Taylor coefficients after rotating the peak to 0, so the
// modulus is even about the peak and [0, pi] suffices.
double log_mean_graded(const AnalyticFunction& f, const PeakLocation& peak, double p, double t, double tol) {
  const double width = peak.width_at(t);
  auto log_at = [&](double psi) { return log_modulus(f, t, peak.theta + psi); };
  const double shift = std::max({log_at(0.0), log_at(kPi), log_at(0.5 * kPi), log_at(std::min(width, kPi))});
  if (shift == kNegInf) return kNegInf;
  std::vector<double> breaks{0.0};
  for (double b = width; b < kPi; b *= 2.0) breaks.push_back(b);
  if (breaks.size() < 4) breaks = {0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi};
  breaks.push_back(kPi);
  auto integrand = [&](double psi) { return std::exp(p * (log_at(psi) - shift)); };
  const auto result = integrate_adaptive(integrand, breaks, quadrature_rel_tol(p, tol), 0.0, 20000);
  if (!result.converged) throw ToleranceNotReached("graded integral mean did not converge");
  return shift + std::log(result.value / kPi) / p;
}

double log_max_modulus(const AnalyticFunction& f, double t, double tol) {
  CircleSampler sampler(f, t);
  const auto peak = peak_location(f);
  const std::size_t grid = next_pow2(std::max<std::size_t>(1024, 8 * (sampler.max_degree() + 1)));
  if (grid > kMaxAngles) throw ToleranceNotReached("maximum modulus needs more than 2^20 angles");

  struct Sample {
    double theta;
    double log_mod;
  };
  std::vector<Sample> samples;
  samples.reserve(grid + 128);
  for (std::size_t j = 0; j < grid; ++j) {
    samples.push_back({2.0 * kPi * static_cast<double>(j) / static_cast<double>(grid), sampler.on_grid(j, grid)});
  }
  if (peak) {
    const double width = peak->width_at(t);
    auto wrap = [](double th) {
      th = std::fmod(th, 2.0 * kPi);
      return th < 0 ? th + 2.0 * kPi : th;
    };
    samples.push_back({wrap(peak->theta), sampler.at(peak->theta)});
    for (double d = width / 8.0; d < kPi; d *= 2.0) {
      samples.push_back({wrap(peak->theta + d), sampler.at(peak->theta + d)});
      samples.push_back({wrap(peak->theta - d), sampler.at(peak->theta - d)});
    }
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.theta < b.theta; });
  }
  double best = kNegInf;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    best = std::max(best, s.log_mod);
    worst = std::min(worst, s.log_mod);
  }
  if (best == kNegInf) return kNegInf;
  if (best - worst <= 1e-14 * std::max(1.0, std::abs(best))) return best;

  // Local maxima within 1% of the global one, strongest first.
  const double cutoff = best + std::log(0.99);
  const std::size_t n = samples.size();
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const double here = samples[i].log_mod;
    if (here < cutoff) continue;
    if (here >= samples[(i + n - 1) % n].log_mod && here >= samples[(i + 1) % n].log_mod) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) { return samples[a].log_mod > samples[b].log_mod; });
  if (candidates.size() > 32) candidates.resize(32);
  for (std::size_t i : candidates) {
    double lo = samples[(i + n - 1) % n].theta;
    double hi = samples[(i + 1) % n].theta;
    if (lo > samples[i].theta) lo -= 2.0 * kPi;
    if (hi < samples[i].theta) hi += 2.0 * kPi;
    const auto found = maximize_golden([&](double th) { return sampler.at(th); }, lo, hi,
                                       (hi - lo) * std::sqrt(tol) * 0.1);
    best = std::max(best, found.value);
  }
  return best;
}

}  // namespace

double log_integral_mean(const AnalyticFunction& f, double p, double t, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  if (!(t > 0.0) || !(t <= 1.0)) throw std::domain_error("radius must lie in [0, 1)");
  if (!(p > 0.0)) throw std::domain_error("exponent p must be positive");
  if (std::isinf(p)) return log_max_modulus(f, t, tol);
  if (const auto peak = peak_location(f)) return log_mean_graded(f, *peak, p, t, tol);
  CircleSampler sampler(f, t);
  return log_mean_trapezoid(sampler, p, tol);
}

double integral_mean(const AnalyticFunction& f, const PositiveExtended& p, double r, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("integral_mean requires 0 < r < 1");
  return std::exp(log_integral_mean(f, p.to_double(), 1.0 - r, tol));
}

std::optional<double> lacunary_log_mean_exact(const AnalyticFunction& f, double p, double t) {
  if (!f.as<Lacunary>() || !(p == 2.0 || p == 4.0 || std::isinf(p))) return std::nullopt;
  const auto e = lacunary_expansion(f, t, 1e-17);
  std::vector<double> logs;  // log |a_n r^(2^(n-1))|
  std::optional<double> phase;
  for (const auto& term : e.terms) {
    if (term.coefficient == Complex(0.0)) continue;
    const double arg = std::arg(term.coefficient);
    if (!phase) phase = arg;
    if (std::isinf(p) && std::abs(std::remainder(arg - *phase, 2.0 * kPi)) > 1e-14) return std::nullopt;
    logs.push_back(std::log(std::abs(term.coefficient)) + term.log_radius_power);
  }
  if (logs.empty()) return kNegInf;
  const double top = *std::max_element(logs.begin(), logs.end());
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (double l : logs) {
    const double a = std::exp(l - top);
    s1 += a;
    s2 += a * a;
    s4 += a * a * a * a;
  }
  if (std::isinf(p)) return top + std::log(s1);
  if (p == 2.0) return top + 0.5 * std::log(s2);
  return top + 0.25 * std::log(2.0 * s2 * s2 - s4);
}

double parseval_mean(const AnalyticFunction& f, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("parseval_mean requires 0 <= r < 1");
  const double scale2 = std::norm(f.scale());
  const double r2 = r * r;
  constexpr double kTailRatio = 1e-12;
  constexpr std::size_t kMaxTerms = 200'000'000;

  // sum_n |front * b_n|^2 (r^2 w)^n with b_n the binomial coefficients of (1-x)^(-gamma).
  auto binomial_sum = [&](double gamma, double w, double front2) {
    double c = 1.0;
    double x = 1.0;
    double sum = 1.0;
    const double rho = r2 * w;
    for (std::size_t n = 1; n < kMaxTerms; ++n) {
      const double nd = static_cast<double>(n);
      c *= (nd - 1.0 + gamma) / nd;
      x *= rho;
      const double term = c * c * x;
      if (c == 0.0) return front2 * sum;
      sum += term;
      if (nd > std::abs(gamma) + 1.0) {
        const double next_ratio = ((nd + gamma) / (nd + 1.0)) * ((nd + gamma) / (nd + 1.0)) * rho;
        const double bound = std::max(next_ratio, rho);
        if (bound < 1.0 && term * bound / (1.0 - bound) < kTailRatio * sum) return front2 * sum;
      }
    }
    throw ToleranceNotReached("Parseval sum did not reach its tail bound");
  };

  double value2 = 0.0;
  if (const auto* p = f.as<Power>()) {
    value2 = binomial_sum(p->gamma.to_double(), 1.0, 1.0);
  } else if (f.as<LogPower>()) {
    throw UnsupportedFamily("parseval_mean needs Taylor coefficients; log-power has none here");
  } else if (const auto* k = f.as<Kernel>()) {
    const double n2 = std::norm(k->center);
    const double front = std::exp(k->s.to_double() * std::log1p(-n2));
    value2 = binomial_sum(k->exponent.to_double(), n2, front * front);
  } else if (const auto* m = f.as<Monomial>()) {
    value2 = std::pow(r2, m->k);
  } else if (const auto* s = f.as<Series>()) {
    double x = 1.0;
    for (Complex c : s->coefficients) {
      value2 += std::norm(c) * x;
      x *= r2;
    }
  } else if (f.as<Lacunary>()) {
    if (r == 0.0) return 0.0;
    AnalyticFunction unit(f.family());
    const auto e = lacunary_expansion(unit, 1.0 - r, 1e-17);
    for (const auto& term : e.terms) value2 += std::norm(term.coefficient) * std::exp(2.0 * term.log_radius_power);
  }
  return std::sqrt(scale2 * value2);
}

std::string MeanProfile::to_csv() const {
  std::ostringstream out;
  out << "r,value,error\n";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out << format_double(radii[i]) << ',' << (failed[i] ? "nan" : format_double(values[i])) << ','
        << (failed[i] ? "nan" : format_double(error_bounds[i])) << '\n';
  }
  return out.str();
}

MeanProfile mean_profile(const AnalyticFunction& f, const PositiveExtended& p, std::span<const double> radii,
                         double tol) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw std::domain_error("profile radii must lie in (0, 1)");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::domain_error("profile radii must increase strictly");
  }
  MeanProfile out{p, {radii.begin(), radii.end()}, std::vector<double>(radii.size(), 0.0),
                  std::vector<double>(radii.size(), 0.0), std::vector<bool>(radii.size(), false)};
  std::vector<char> failed(radii.size(), 0);
  parallel_for(radii.size(), [&](std::size_t i) {
    try {
      out.values[i] = integral_mean(f, p, radii[i], tol);
      out.error_bounds[i] = tol * out.values[i];
    } catch (const ToleranceNotReached&) {
      // deep radii of lacunary series exceed the angle budget; use a closed form when one exists
      const auto exact = lacunary_log_mean_exact(f, p.to_double(), 1.0 - radii[i]);
      if (exact) {
        out.values[i] = std::exp(*exact);
        out.error_bounds[i] = 1e-13 * out.values[i];
      } else {
        failed[i] = 1;
      }
    }
  });
  for (std::size_t i = 0; i < failed.size(); ++i) out.failed[i] = failed[i] != 0;
  return out;
}

}  // namespace mnl

#include "mnl/function_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mnl/format.hpp"
#include "mnl/quadrature.hpp"

namespace mnl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// log|1 - (1 - t) e^{i theta}| computed without cancellation.
double log_abs_one_minus(double t, double theta) {
  return std::log(std::hypot(t, 2.0 * std::sqrt(1.0 - t) * std::sin(0.5 * theta)));
}

// arg(1 - (1 - t) e^{i theta}), also cancellation-free.
double arg_one_minus(double t, double theta) {
  const double r = 1.0 - t;
  const double s = std::sin(0.5 * theta);
  return std::atan2(-r * std::sin(theta), t + 2.0 * r * s * s);
}

double log_abs(Complex c) { return c == Complex(0.0) ? -kInf : std::log(std::abs(c)); }

Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> power_coefficients(double gamma, std::size_t n) {
  std::vector<Complex> c(n + 1);
  double v = 1.0;
  c[0] = v;
  for (std::size_t k = 1; k <= n; ++k) {
    v *= (static_cast<double>(k) - 1.0 + gamma) / static_cast<double>(k);
    c[k] = v;
  }
  return c;
}

Complex lacunary_sum(const LacunaryExpansion& e, Complex z) {
  if (z == Complex(0.0)) return 0.0;
  const double lr = std::log(std::abs(z));
  const double phase = std::arg(z);
  Complex acc = 0.0;
  for (const auto& term : e.terms) {
    const double m = static_cast<double>(term.degree);
    acc += term.coefficient * std::polar(std::exp(m * lr), std::fmod(m * phase, 2.0 * std::numbers::pi));
  }
  return acc;
}

}  // namespace

Complex LacunaryRule::coefficient(int n) const {
  if (custom) return custom(n);
  return scale * std::exp2(static_cast<double>(n) * geometric.to_double()) *
         std::pow(static_cast<double>(n), -poly_decay.to_double());
}

AnalyticFunction::AnalyticFunction(Family family, Complex scale) : family_(std::move(family)), scale_(scale) {
  if (const auto* k = std::get_if<Kernel>(&family_)) {
    if (!(std::abs(k->center) < 1.0)) throw std::domain_error("kernel center must lie in the open unit disk");
  }
  if (const auto* l = std::get_if<Lacunary>(&family_)) {
    if (l->max_terms < 1 || l->max_terms > 62) throw std::domain_error("lacunary term budget must be in [1, 62]");
  }
}

AnalyticFunction AnalyticFunction::kernel(Complex center, Rational s, Rational exponent) {
  if (s.sign() <= 0) throw std::domain_error("kernel parameter s must be positive");
  return AnalyticFunction(Kernel{center, s, exponent});
}

std::string AnalyticFunction::describe() const {
  std::string body = std::visit(
      Overloaded{
          [](const Power& f) { return "power:" + f.gamma.str(); },
          [](const LogPower& f) { return "logpower:" + f.gamma.str() + "," + f.c.str(); },
          [](const Lacunary& f) -> std::string {
            if (!f.rule.is_structured()) return "lacunary:custom";
            if (f.rule.scale == 1.0 && f.rule.geometric.is_zero() && f.rule.poly_decay.is_zero()) return "lacunary:ones";
            return "lacunary:" + format_double(f.rule.scale) + "," + f.rule.geometric.str() + "," +
                   f.rule.poly_decay.str();
          },
          [](const Kernel& f) {
            return "kernel:" + format_double(f.center.real()) + "," + format_double(f.center.imag()) + "," +
                   f.s.str() + "," + f.exponent.str();
          },
          [](const Monomial& f) { return "monomial:" + std::to_string(f.k); },
          [](const Series& f) {
            std::string out = "series:";
            for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
              if (i) out += ",";
              out += format_double(f.coefficients[i].real());
              if (f.coefficients[i].imag() != 0.0) out += (f.coefficients[i].imag() > 0 ? "+" : "") +
                                                          format_double(f.coefficients[i].imag()) + "i";
            }
            return out;
          },
      },
      family_);
  if (scale_ != Complex(1.0)) {
    body += "*" + format_double(scale_.real());
    if (scale_.imag() != 0.0) body += (scale_.imag() > 0 ? "+" : "") + format_double(scale_.imag()) + "i";
  }
  return body;
}

LacunaryExpansion lacunary_expansion(const AnalyticFunction& f, double t, double rel_tol) {
  const auto* lac = f.as<Lacunary>();
  if (!lac) throw std::invalid_argument("lacunary_expansion on a non-lacunary function");
  if (!(t > 0.0)) throw std::domain_error("lacunary series diverge on the unit circle");
  LacunaryExpansion out;
  if (t >= 1.0) return out;  // every term vanishes at the origin
  const double lr = std::log1p(-t);
  double magnitude_sum = 0.0;
  for (int n = 1; n <= lac->max_terms; ++n) {
    const double m = std::ldexp(1.0, n - 1);
    const Complex c = f.scale() * lac->rule.coefficient(n);
    const double log_term = log_abs(c) + m * lr;
    const double term = std::exp(log_term);
    // Past the radius-dependent peak the factors r^(2^(n-1)) square at every
    // step, so once a term is negligible the rest of the tail is too.
    if (m * (-lr) > 1.0 && magnitude_sum > 0.0 && term < rel_tol * magnitude_sum) {
      const double next = std::abs(f.scale() * lac->rule.coefficient(n + 1)) * std::exp(2.0 * m * lr);
      out.tail_bound = 2.0 * (term + next);
      return out;
    }
    out.terms.push_back({static_cast<std::uint64_t>(1) << (n - 1), c, m * lr});
    magnitude_sum += term;
  }
  if (magnitude_sum == 0.0) return out;
  throw ToleranceNotReached("lacunary term budget exhausted at r = 1 - " + format_double(t));
}

LacunaryBudget lacunary_budget(const LacunaryRule& rule, const Rational& alpha, double tol) {
  const double a = alpha.to_double();
  LacunaryBudget out;
  auto weighted = [&](int n) { return std::abs(rule.coefficient(n)) * std::exp2(-a * n); };
  int n = 1;
  for (; n <= 62; ++n) {
    if (!(weighted(n) > tol * std::exp2(-0.5 * a * n))) break;
  }
  out.terms = n - 1;
  // Beyond the cut, 2^(-n alpha)|a_n| <= tol * 2^(-n alpha/2), a geometric tail.
  const int first = out.terms + 1;
  const double ratio = std::exp2(-0.5 * a);
  if (out.terms < 62) {
    out.tail_bound = tol * std::exp2(-0.5 * a * first) / (1.0 - ratio);
  } else {
    out.tail_bound = kInf;
  }
  return out;
}

Complex eval(const AnalyticFunction& f, Complex z) {
  if (!(std::abs(z) < 1.0)) throw std::domain_error("evaluation point must satisfy |z| < 1");
  const Complex value = std::visit(
      Overloaded{
          [&](const Power& p) { return std::exp(-p.gamma.to_double() * std::log(1.0 - z)); },
          [&](const LogPower& p) {
            const Complex l = std::log(1.0 - z);
            return std::exp(-p.gamma.to_double() * l - p.c.to_double() * std::log(1.0 - l));
          },
          [&](const Lacunary&) -> Complex {
            if (z == Complex(0.0)) return 0.0;
            // Scale is applied below; expand the unscaled series.
            AnalyticFunction unit(f.family());
            return lacunary_sum(lacunary_expansion(unit, 1.0 - std::abs(z)), z);
          },
          [&](const Kernel& k) {
            const double n2 = std::norm(k.center);
            return std::exp(k.s.to_double() * std::log1p(-n2) -
                            k.exponent.to_double() * std::log(1.0 - std::conj(k.center) * z));
          },
          [&](const Monomial& m) { return m.k == 0 ? Complex(1.0) : std::pow(z, static_cast<int>(m.k)); },
          [&](const Series& s) { return horner(s.coefficients, z); },
      },
      f.family());
  return f.scale() * value;
}

double log_modulus(const AnalyticFunction& f, double t, double theta) {
  const double log_scale = log_abs(f.scale());
  if (log_scale == -kInf) return -kInf;
  const double body = std::visit(
      Overloaded{
          [&](const Power& p) { return -p.gamma.to_double() * log_abs_one_minus(t, theta); },
          [&](const LogPower& p) {
            const double l = log_abs_one_minus(t, theta);
            const double a = arg_one_minus(t, theta);
            return -p.gamma.to_double() * l - p.c.to_double() * 0.5 * std::log((1.0 - l) * (1.0 - l) + a * a);
          },
          [&](const Lacunary&) {
            AnalyticFunction unit(f.family());
            const Complex z = std::polar(1.0 - t, theta);
            return log_abs(lacunary_sum(lacunary_expansion(unit, t), z));
          },
          [&](const Kernel& k) {
            const double rho = std::abs(k.center);
            const double d0 = 1.0 - rho;
            const double big_t = d0 + t - d0 * t;
            const double psi = theta - std::arg(k.center);
            return k.s.to_double() * std::log(d0 * (2.0 - d0)) -
                   k.exponent.to_double() * log_abs_one_minus(big_t, psi);
          },
          [&](const Monomial& m) { return static_cast<double>(m.k) * std::log1p(-t); },
          [&](const Series& s) { return log_abs(horner(s.coefficients, std::polar(1.0 - t, theta))); },
      },
      f.family());
  return log_scale + body;
}

std::optional<PeakLocation> peak_location(const AnalyticFunction& f) {
  if (const auto* p = f.as<Power>()) {
    if (p->gamma.is_integer() && p->gamma.sign() <= 0) return std::nullopt;
    return PeakLocation{0.0, 0.0};
  }
  if (f.as<LogPower>()) return PeakLocation{0.0, 0.0};
  if (const auto* k = f.as<Kernel>()) {
    if (k->center == Complex(0.0) || k->exponent.is_zero()) return std::nullopt;
    return PeakLocation{std::arg(k->center), 1.0 - std::abs(k->center)};
  }
  return std::nullopt;
}

double growth_order(const AnalyticFunction& f) {
  if (const auto* p = f.as<Power>()) return std::max(0.0, p->gamma.to_double());
  if (const auto* p = f.as<LogPower>()) return std::max(0.0, p->gamma.to_double());
  if (const auto* l = f.as<Lacunary>()) {
    return l->rule.is_structured() ? std::max(0.0, l->rule.geometric.to_double())
                                   : std::numeric_limits<double>::quiet_NaN();
  }
  return 0.0;
}

std::vector<Complex> taylor_coefficients(const AnalyticFunction& f, std::size_t n) {
  std::vector<Complex> c = std::visit(
      Overloaded{
          [&](const Power& p) { return power_coefficients(p.gamma.to_double(), n); },
          [&](const LogPower&) -> std::vector<Complex> {
            throw UnsupportedFamily("log-power functions have no closed-form Taylor coefficients here");
          },
          [&](const Lacunary& l) {
            std::vector<Complex> out(n + 1, 0.0);
            for (int k = 1; k <= l.max_terms; ++k) {
              const std::uint64_t degree = static_cast<std::uint64_t>(1) << (k - 1);
              if (degree > n) break;
              out[degree] = l.rule.coefficient(k);
            }
            return out;
          },
          [&](const Kernel& k) {
            auto out = power_coefficients(k.exponent.to_double(), n);
            const Complex w = std::conj(k.center);
            const double front = std::exp(k.s.to_double() * std::log1p(-std::norm(k.center)));
            Complex wp = front;
            for (auto& c_i : out) {
              c_i *= wp;
              wp *= w;
            }
            return out;
          },
          [&](const Monomial& m) {
            std::vector<Complex> out(n + 1, 0.0);
            if (m.k <= n) out[m.k] = 1.0;
            return out;
          },
          [&](const Series& s) {
            std::vector<Complex> out(n + 1, 0.0);
            for (std::size_t i = 0; i <= n && i < s.coefficients.size(); ++i) out[i] = s.coefficients[i];
            return out;
          },
      },
      f.family());
  for (auto& ci : c) ci *= f.scale();
  return c;
}

std::string to_string(MembershipStatus status) {
  switch (status) {
    case MembershipStatus::Member: return "Member";
    case MembershipStatus::NotMember: return "NotMember";
    case MembershipStatus::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

Membership verdict(bool member, std::string criterion, bool extension = false) {
  return {member ? MembershipStatus::Member : MembershipStatus::NotMember, std::move(criterion), extension};
}

Membership lacunary_membership(const Lacunary& lac, const SpaceParams& s) {
  const LacunaryRule& rule = lac.rule;
  if (rule.is_structured()) {
    if (rule.scale == 0.0) return verdict(true, "zero function");
    // 2^(-n alpha) a_n = scale * 2^(n (b - alpha)) * n^(-c)
    const auto cmp = rule.geometric <=> s.alpha;
    if (cmp < 0) return verdict(true, "lacunary: weighted coefficients decay geometrically");
    if (cmp > 0) return verdict(false, "lacunary: weighted coefficients grow geometrically");
    if (s.q.is_infinite()) {
      return verdict(rule.poly_decay.sign() >= 0, "lacunary: sup of n^(-c) finite iff c >= 0");
    }
    return verdict(rule.poly_decay > s.q.reciprocal(), "lacunary: n^(-c) in l^q iff c > 1/q");
  }
  // Numerical l^q test on the weighted sequence; no verdict unless it settles.
  const double a = s.alpha.to_double();
  std::vector<double> w;
  for (int n = 1; n <= lac.max_terms; ++n) w.push_back(std::abs(rule.coefficient(n)) * std::exp2(-a * n));
  const std::size_t k = w.size();
  if (k < 8) return {MembershipStatus::Unknown, "lacunary: too few terms for a numerical l^q test", false};
  bool decaying = true;
  for (std::size_t i = k - 6; i < k; ++i) decaying = decaying && w[i] <= w[i - 1];
  if (s.q.is_infinite()) {
    if (decaying) return verdict(true, "lacunary: weighted coefficients bounded (numerical)");
    return {MembershipStatus::Unknown, "lacunary: weighted coefficients not settled", false};
  }
  const double q = s.q.to_double();
  double partial = 0.0;
  for (double x : w) partial += std::pow(x, q);
  const double last = std::pow(w[k - 1], q);
  const double prev = std::pow(w[k - 2], q);
  if (decaying && prev > 0.0 && last / prev < 0.95) {
    const double ratio = last / prev;
    if (last * ratio / (1.0 - ratio) < 1e-12 * partial) {
      return verdict(true, "lacunary: l^q partial sums stabilized (numerical)");
    }
  }
  return {MembershipStatus::Unknown, "lacunary: l^q partial sums not stabilized within budget", false};
}

}  // namespace

Membership known_membership(const AnalyticFunction& f, const SpaceParams& s) {
  if (f.scale() == Complex(0.0)) return verdict(true, "zero function");
  const Rational critical = s.critical_order();
  const bool q_finite = s.q.is_finite();
  return std::visit(
      Overloaded{
          [&](const Power& p) {
            if (q_finite) return verdict(p.gamma < critical, "power: gamma < alpha + 1/p");
            return verdict(p.gamma <= critical, "power: gamma <= alpha + 1/p (q = inf)");
          },
          [&](const LogPower& p) {
            if (p.gamma == critical) {
              if (q_finite) return verdict(p.c > s.q.reciprocal(), "log-power at gamma = alpha + 1/p: c > 1/q");
              return verdict(p.c.sign() >= 0, "log-power at gamma = alpha + 1/p: c >= 0 (q = inf)");
            }
            return verdict(p.gamma < critical, "log-power off the critical exponent: power criterion on gamma",
                           true);
          },
          [&](const Lacunary& l) { return lacunary_membership(l, s); },
          [&](const Kernel&) { return verdict(true, "kernel: bounded on the closed disk"); },
          [&](const Monomial&) { return verdict(true, "monomial: bounded"); },
          [&](const Series&) { return verdict(true, "polynomial: bounded"); },
      },
      f.family());
}

}  // namespace mnl

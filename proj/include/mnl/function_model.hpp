#pragma once

// Test-function families on the unit disk: closed-form evaluation, Taylor
// coefficients and the exact membership criteria for H(p, q, alpha).

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mnl/rational.hpp"
#include "mnl/space_params.hpp"

namespace mnl {

using Complex = std::complex<double>;

/// (1 - z)^(-gamma)
struct Power {
  Rational gamma;
};

/// (1 - z)^(-gamma) * (log(e / (1 - z)))^(-c)
struct LogPower {
  Rational gamma;
  Rational c;
};

/// Coefficient rule n -> a_n for n >= 1. The structured form
/// a_n = scale * 2^(n * geometric) * n^(-poly_decay) covers every witness the
/// inclusion proofs use and admits an exact l^q decision; `custom` overrides it
/// with an arbitrary rule that can only be tested numerically.
struct LacunaryRule {
  double scale = 1.0;
  Rational geometric{0};
  Rational poly_decay{0};
  std::function<Complex(int)> custom;

  bool is_structured() const { return !custom; }
  Complex coefficient(int n) const;
};

/// sum_{n >= 1} a_n z^(2^(n-1)), truncated to at most max_terms terms.
struct Lacunary {
  LacunaryRule rule;
  int max_terms = 62;
};

/// (1 - |z0|^2)^s / (1 - conj(z0) w)^exponent
struct Kernel {
  Complex center;
  Rational s;
  Rational exponent;
};

/// z^k
struct Monomial {
  unsigned k = 0;
};

/// sum_n coefficients[n] z^n
struct Series {
  std::vector<Complex> coefficients;
};

using Family = std::variant<Power, LogPower, Lacunary, Kernel, Monomial, Series>;

/// A family member times a complex scale factor. Immutable.
class AnalyticFunction {
 public:
  AnalyticFunction(Family family, Complex scale = 1.0);

  static AnalyticFunction power(Rational gamma) { return AnalyticFunction(Power{gamma}); }
  static AnalyticFunction log_power(Rational gamma, Rational c) { return AnalyticFunction(LogPower{gamma, c}); }
  static AnalyticFunction lacunary(LacunaryRule rule, int max_terms = 62) {
    return AnalyticFunction(Lacunary{std::move(rule), max_terms});
  }
  static AnalyticFunction kernel(Complex center, Rational s, Rational exponent);
  static AnalyticFunction monomial(unsigned k) { return AnalyticFunction(Monomial{k}); }
  static AnalyticFunction series(std::vector<Complex> coefficients) {
    return AnalyticFunction(Series{std::move(coefficients)});
  }
  static AnalyticFunction constant(Complex value) { return series({value}); }

  const Family& family() const { return family_; }
  Complex scale() const { return scale_; }
  AnalyticFunction scaled(Complex factor) const { return AnalyticFunction(family_, scale_ * factor); }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&family_);
  }

  /// Short human-readable form, e.g. "power:3/2" or "kernel:0.5,0,1,2".
  std::string describe() const;

 private:
  Family family_;
  Complex scale_;
};

/// Thrown by operations a family does not support (e.g. Taylor coefficients
/// of LogPower).
class UnsupportedFamily : public std::invalid_argument {
 public:
  explicit UnsupportedFamily(const std::string& what) : std::invalid_argument(what) {}
};

/// f(z) for |z| < 1, principal branches. Throws std::domain_error otherwise.
Complex eval(const AnalyticFunction& f, Complex z);

/// log |f((1 - t) e^{i theta})|. Taking t = 1 - r directly keeps |1 - z| accurate
/// as r -> 1 (down to t ~ 1e-300). Returns -inf where f vanishes.
double log_modulus(const AnalyticFunction& f, double t, double theta);

/// Direction and distance of the nearest boundary singularity, for families
/// whose modulus concentrates around one angle (Power, LogPower, Kernel).
/// At radius r = 1 - t the peak has angular width about width_at(t).
struct PeakLocation {
  double theta = 0.0;
  double distance = 0.0;  // 0 for a singularity on the circle, 1 - |z0| for Kernel

  double width_at(double t) const { return distance + t - distance * t; }
};
std::optional<PeakLocation> peak_location(const AnalyticFunction& f);

/// Largest exponent g with |f(z)| growing like (1 - |z|)^(-g) (0 for bounded
/// families). Used to pick instances away from critical exponents.
double growth_order(const AnalyticFunction& f);

/// Lacunary terms active at radius r = 1 - t.
struct LacunaryTerm {
  std::uint64_t degree;  // 2^(n-1)
  Complex coefficient;   // scale * a_n
  double log_radius_power;  // degree * log(r)
};
struct LacunaryExpansion {
  std::vector<LacunaryTerm> terms;
  double tail_bound = 0.0;  // bound on |sum of dropped terms| at this radius
};
/// Throws ToleranceNotReached if the term budget cannot reach rel_tol.
LacunaryExpansion lacunary_expansion(const AnalyticFunction& f, double t, double rel_tol = 1e-17);

/// Truncation of a structured lacunary rule for norms in a space of weight
/// alpha: keeps n while 2^(-n alpha)|a_n| > tol * 2^(-n alpha / 2).
struct LacunaryBudget {
  int terms = 0;
  double tail_bound = 0.0;  // bound on sum_{n > terms} 2^(-n alpha)|a_n|
};
LacunaryBudget lacunary_budget(const LacunaryRule& rule, const Rational& alpha, double tol);

/// c_0..c_N of the Taylor expansion at 0.
std::vector<Complex> taylor_coefficients(const AnalyticFunction& f, std::size_t n);

enum class MembershipStatus { Member, NotMember, Unknown };

struct Membership {
  MembershipStatus status = MembershipStatus::Unknown;
  std::string criterion;
  /// Set when the verdict extends a published criterion rather than applying it verbatim.
  bool extension = false;

  bool is_member() const { return status == MembershipStatus::Member; }
  bool is_not_member() const { return status == MembershipStatus::NotMember; }
};

/// Analytic membership of f in H(p, q, alpha), decided exactly on rationals.
Membership known_membership(const AnalyticFunction& f, const SpaceParams& s);

std::string to_string(MembershipStatus status);

}  // namespace mnl

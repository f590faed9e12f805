#pragma once

// Exact rational numbers for space parameters and family exponents.
//
// Every branch of the inclusion characterization flips at an exact equality
// (alpha == beta, alpha + 1/p == beta + 1/u, q == v), so parameters never pass
// through floating point before those comparisons are made.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mnl {

/// Normalized fraction num/den with den > 0 and gcd(num, den) == 1.
/// Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "7", "-3", "3/2". Decimal strings are rejected with a hint.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  std::string str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A value in (0, inf]: either a positive finite rational or +infinity.
/// 1/inf is zero, so reciprocal() is always a finite rational.
class PositiveExtended {
 public:
  PositiveExtended(Rational value);  // NOLINT(google-explicit-constructor)
  PositiveExtended(std::int64_t value) : PositiveExtended(Rational(value)) {}  // NOLINT
  static PositiveExtended infinity();

  /// "inf" (also "infinity", "oo") or any Rational::parse string.
  static PositiveExtended parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Throws std::logic_error when infinite.
  const Rational& value() const;
  Rational reciprocal() const;
  double to_double() const;
  std::string str() const;

  friend bool operator==(const PositiveExtended& a, const PositiveExtended& b);
  friend std::strong_ordering operator<=>(const PositiveExtended& a, const PositiveExtended& b);

 private:
  PositiveExtended() = default;
  Rational value_{1};
  bool infinite_ = false;
};

}  // namespace mnl

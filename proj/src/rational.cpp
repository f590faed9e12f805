#include "mnl/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mnl {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t out = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not an exact rational: '" + std::string(whole) + "'");
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min()) {
      throw std::overflow_error("rational arithmetic overflow");
    }
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.find_first_of(".eE") != std::string_view::npos) {
    throw std::invalid_argument("decimal input '" + std::string(text) +
                                "' is not accepted; write an exact fraction such as 1/3 or 3/2");
  }
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s, text));
  return Rational(parse_int(trim(s.substr(0, slash)), text), parse_int(trim(s.substr(slash + 1)), text));
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return make(-Wide(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return Wide(a.num_) * b.den_ <=> Wide(b.num_) * a.den_;
}

PositiveExtended::PositiveExtended(Rational value) : value_(value) {
  if (value.sign() <= 0) throw std::domain_error("parameter must be positive, got " + value.str());
}

PositiveExtended PositiveExtended::infinity() {
  PositiveExtended out;
  out.infinite_ = true;
  return out;
}

PositiveExtended PositiveExtended::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s == "inf" || s == "infinity" || s == "oo" || s == "Inf" || s == "INF") return infinity();
  return PositiveExtended(Rational::parse(s));
}

const Rational& PositiveExtended::value() const {
  if (infinite_) throw std::logic_error("value() of an infinite parameter");
  return value_;
}

Rational PositiveExtended::reciprocal() const { return infinite_ ? Rational(0) : Rational(1) / value_; }

double PositiveExtended::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double();
}

std::string PositiveExtended::str() const { return infinite_ ? "inf" : value_.str(); }

bool operator==(const PositiveExtended& a, const PositiveExtended& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const PositiveExtended& a, const PositiveExtended& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  return a.value_ <=> b.value_;
}

}  // namespace mnl

#include "mnl/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mnl {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma requires x > 0");
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x); sin(pi x) > 0 on (0, 1/2).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) series += kLanczosCoeffs[i] / (xm1 + static_cast<double>(i));
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(series);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta requires a > 0 and b > 0");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

}  // namespace mnl

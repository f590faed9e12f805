#pragma once

namespace mnl {

/// log Gamma(x) for x > 0 via the Lanczos approximation (g = 7, 9 terms),
/// with the reflection formula below x = 1/2.
double log_gamma(double x);

/// Beta function B(a, b) = integral_0^1 (1-x)^(a-1) x^(b-1) dx for a, b > 0.
/// Throws std::domain_error for nonpositive arguments.
double beta(double a, double b);

/// log B(a, b); stays finite where beta() underflows.
double log_beta(double a, double b);

}  // namespace mnl

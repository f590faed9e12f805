#pragma once

#include <string>
#include <string_view>

#include "mnl/rational.hpp"

namespace mnl {

/// Parameters (p, q, alpha) of the mixed norm space H(p, q, alpha):
/// p, q in (0, inf] and alpha in (0, inf).
struct SpaceParams {
  PositiveExtended p;
  PositiveExtended q;
  Rational alpha;

  SpaceParams(PositiveExtended p_, PositiveExtended q_, Rational alpha_);

  /// "p,q,alpha" with each field an exact rational or "inf" (alpha must be finite).
  static SpaceParams parse(std::string_view text);

  /// alpha + 1/p, the critical growth order for point evaluation.
  Rational critical_order() const { return alpha + p.reciprocal(); }

  std::string str() const;

  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

}  // namespace mnl

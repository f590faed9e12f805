#include "mnl/space_params.hpp"

#include <stdexcept>
#include <vector>

namespace mnl {

SpaceParams::SpaceParams(PositiveExtended p_, PositiveExtended q_, Rational alpha_)
    : p(p_), q(q_), alpha(alpha_) {
  if (alpha.sign() <= 0) throw std::domain_error("alpha must be positive, got " + alpha.str());
}

SpaceParams SpaceParams::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    parts.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) {
    throw std::invalid_argument("space must be 'p,q,alpha', got '" + std::string(text) + "'");
  }
  auto alpha = PositiveExtended::parse(parts[2]);
  if (alpha.is_infinite()) throw std::domain_error("alpha must be finite");
  return SpaceParams(PositiveExtended::parse(parts[0]), PositiveExtended::parse(parts[1]), alpha.value());
}

std::string SpaceParams::str() const { return "(" + p.str() + "," + q.str() + "," + alpha.str() + ")"; }

}  // namespace mnl

#pragma once

// JSON and shorthand serialization of AnalyticFunction:
//   {"family": "power", "params": {"gamma": "3/2"}, "scale": [1, 0]}
// Exponents are exact rational strings; complex numbers are [re, im] pairs.
// Shorthand forms accepted on the command line:
//   power:G  logpower:G,C  lacunary:ones  lacunary:K,B,C  kernel:RE,IM,S,E
//   monomial:K  series:C0,C1,...  const:C

#include <string_view>

#include "json.hpp"

#include "mnl/function_model.hpp"

namespace mnl {

nlohmann::json function_to_json(const AnalyticFunction& f);
AnalyticFunction function_from_json(const nlohmann::json& j);

/// JSON object text (leading '{') or a shorthand form. Throws std::invalid_argument.
AnalyticFunction parse_function_spec(std::string_view text);

}  // namespace mnl

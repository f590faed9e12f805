#include "mnl/function_json.hpp"

#include <charconv>
#include <string>
#include <vector>

namespace mnl {

namespace {

using nlohmann::json;

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("complex value must be a number or [re, im]");
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw std::invalid_argument("exponents must be exact rational strings such as \"3/2\"");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_real(std::string_view s) {
  if (s.find('/') != std::string_view::npos) return Rational::parse(s).to_double();
  double out = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return out;
}

void expect_args(const std::vector<std::string_view>& args, std::size_t n, std::string_view family) {
  if (args.size() != n) {
    throw std::invalid_argument(std::string(family) + " expects " + std::to_string(n) + " parameter(s)");
  }
}

}  // namespace

nlohmann::json function_to_json(const AnalyticFunction& f) {
  json out;
  json params = json::object();
  if (const auto* p = f.as<Power>()) {
    out["family"] = "power";
    params["gamma"] = p->gamma.str();
  } else if (const auto* p = f.as<LogPower>()) {
    out["family"] = "logpower";
    params["gamma"] = p->gamma.str();
    params["c"] = p->c.str();
  } else if (const auto* l = f.as<Lacunary>()) {
    if (!l->rule.is_structured()) throw std::invalid_argument("custom lacunary rules are not serializable");
    out["family"] = "lacunary";
    params["scale"] = l->rule.scale;
    params["geometric"] = l->rule.geometric.str();
    params["poly_decay"] = l->rule.poly_decay.str();
    params["max_terms"] = l->max_terms;
  } else if (const auto* k = f.as<Kernel>()) {
    out["family"] = "kernel";
    params["center"] = complex_to_json(k->center);
    params["s"] = k->s.str();
    params["exponent"] = k->exponent.str();
  } else if (const auto* m = f.as<Monomial>()) {
    out["family"] = "monomial";
    params["k"] = m->k;
  } else if (const auto* s = f.as<Series>()) {
    out["family"] = "series";
    json coeffs = json::array();
    for (Complex c : s->coefficients) coeffs.push_back(complex_to_json(c));
    params["coefficients"] = coeffs;
  }
  out["params"] = params;
  if (f.scale() != Complex(1.0)) out["scale"] = complex_to_json(f.scale());
  return out;
}

AnalyticFunction function_from_json(const nlohmann::json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const json& params = j.contains("params") ? j.at("params") : json::object();
    const Complex scale = j.contains("scale") ? complex_from_json(j.at("scale")) : Complex(1.0);
    if (family == "power") {
      return AnalyticFunction(Power{rational_from_json(params.at("gamma"))}, scale);
    }
    if (family == "logpower") {
      return AnalyticFunction(LogPower{rational_from_json(params.at("gamma")), rational_from_json(params.at("c"))},
                              scale);
    }
    if (family == "lacunary") {
      LacunaryRule rule;
      rule.scale = params.value("scale", 1.0);
      if (params.contains("geometric")) rule.geometric = rational_from_json(params.at("geometric"));
      if (params.contains("poly_decay")) rule.poly_decay = rational_from_json(params.at("poly_decay"));
      return AnalyticFunction(Lacunary{rule, params.value("max_terms", 62)}, scale);
    }
    if (family == "kernel") {
      return AnalyticFunction::kernel(complex_from_json(params.at("center")), rational_from_json(params.at("s")),
                                      rational_from_json(params.at("exponent")))
          .scaled(scale);
    }
    if (family == "monomial") {
      const auto k = params.at("k").get<std::int64_t>();
      if (k < 0) throw std::invalid_argument("monomial degree must be nonnegative");
      return AnalyticFunction(Monomial{static_cast<unsigned>(k)}, scale);
    }
    if (family == "series") {
      std::vector<Complex> coeffs;
      for (const auto& c : params.at("coefficients")) coeffs.push_back(complex_from_json(c));
      return AnalyticFunction(Series{coeffs}, scale);
    }
    throw std::invalid_argument("unknown function family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed function JSON: ") + e.what());
  }
}

AnalyticFunction parse_function_spec(std::string_view text) {
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed function JSON: ") + e.what());
    }
    return function_from_json(j);
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("function spec must look like 'family:params'");
  const std::string_view family = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  if (family == "power") {
    expect_args(args, 1, family);
    return AnalyticFunction::power(Rational::parse(args[0]));
  }
  if (family == "logpower") {
    expect_args(args, 2, family);
    return AnalyticFunction::log_power(Rational::parse(args[0]), Rational::parse(args[1]));
  }
  if (family == "lacunary") {
    if (args.size() == 1 && args[0] == "ones") return AnalyticFunction::lacunary({});
    expect_args(args, 3, family);
    LacunaryRule rule;
    rule.scale = parse_real(args[0]);
    rule.geometric = Rational::parse(args[1]);
    rule.poly_decay = Rational::parse(args[2]);
    return AnalyticFunction::lacunary(rule);
  }
  if (family == "kernel") {
    expect_args(args, 4, family);
    return AnalyticFunction::kernel({parse_real(args[0]), parse_real(args[1])}, Rational::parse(args[2]),
                                    Rational::parse(args[3]));
  }
  if (family == "monomial") {
    expect_args(args, 1, family);
    const auto k = Rational::parse(args[0]);
    if (!k.is_integer() || k.sign() < 0) throw std::invalid_argument("monomial degree must be a nonnegative integer");
    return AnalyticFunction::monomial(static_cast<unsigned>(k.num()));
  }
  if (family == "series" || family == "const") {
    if (family == "const") expect_args(args, 1, family);
    std::vector<Complex> coeffs;
    for (auto a : args) coeffs.emplace_back(parse_real(a), 0.0);
    return AnalyticFunction::series(coeffs);
  }
  throw std::invalid_argument("unknown function family '" + std::string(family) + "'");
}

}  // namespace mnl

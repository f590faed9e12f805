// mnl: command-line front end for mixed norm computations.
//
// Exit codes: 0 success (norm: finite or divergent; include: included),
// 1 include: not included, 2 usage error, 3 norm inconclusive,
// 4 quadrature budget exhausted, 5 verify: unexpected check outcome.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mnl/estimates.hpp"
#include "mnl/format.hpp"
#include "mnl/function_json.hpp"
#include "mnl/inclusion.hpp"
#include "mnl/integral_means.hpp"
#include "mnl/mixed_norm.hpp"
#include "mnl/quadrature.hpp"

namespace {

enum Exit { kOk = 0, kNotIncluded = 1, kUsage = 2, kInconclusive = 3, kBudget = 4, kUnexpected = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string path;
  std::ostringstream buffer;

  void flush() {
    if (path.empty() || path == "-") {
      std::cout << buffer.str();
      std::cout.flush();
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + path);
    file << buffer.str();
  }
};

mnl::SpaceParams parse_space(const std::string& text) {
  try {
    return mnl::SpaceParams::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("bad space '" + text + "': " + e.what());
  }
}

mnl::AnalyticFunction parse_function(const std::string& text) {
  try {
    return mnl::parse_function_spec(text);
  } catch (const std::exception& e) {
    throw UsageError("bad function '" + text + "': " + e.what());
  }
}

mnl::PositiveExtended parse_exponent(const std::string& text) {
  try {
    return mnl::PositiveExtended::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("bad exponent '" + text + "': " + e.what());
  }
}

void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw UsageError("tolerance must lie in (0, 1e-2]");
}

// "a..b" with integers a <= b.
std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("range must look like a..b");
  try {
    std::size_t used = 0;
    const int a = std::stoi(text.substr(0, dots), &used);
    if (used != dots) throw UsageError("bad range start");
    const std::string rest = text.substr(dots + 2);
    const int b = std::stoi(rest, &used);
    if (used != rest.size()) throw UsageError("bad range end");
    if (a < 1 || b < a || b > 1000) throw UsageError("range must satisfy 1 <= a <= b <= 1000");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("range must look like a..b");
  }
}

std::vector<mnl::AnalyticFunction> read_battery(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read battery file " + path);
  std::vector<mnl::AnalyticFunction> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_function(line.substr(first)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral means, mixed norms and inclusions of H(p,q,alpha) spaces"};
  app.require_subcommand(1);

  std::string f_spec, space, src, dst, p_text = "2", out_path, k_range = "1..20", alpha_text, checks = "*";
  std::string format = "json", verify_format = "table", battery_path;
  std::vector<std::string> radii_text;
  std::vector<std::string> battery_specs;
  double tol = 1e-9;
  bool weighted = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol, "relative tolerance in (0, 1e-2]");
    cmd->add_option("--out", out_path, "write output to this path instead of stdout");
  };

  auto* norm = app.add_subcommand("norm", "mixed norm of a function");
  norm->add_option("--f", f_spec, "function: JSON or shorthand such as power:3/2")->required();
  norm->add_option("--space", space, "p,q,alpha")->required();
  add_common(norm);

  auto* mean = app.add_subcommand("mean", "integral mean M_p(r, f)");
  mean->add_option("--f", f_spec, "function")->required();
  mean->add_option("--p", p_text, "exponent p (rational or inf)");
  mean->add_option("--r", radii_text, "radii in (0, 1)")->required();
  mean->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_common(mean);

  auto* include = app.add_subcommand("include", "decide H(src) contained in H(dst)");
  include->add_option("--src", src, "p,q,alpha")->required();
  include->add_option("--dst", dst, "u,v,beta")->required();
  add_common(include);

  auto* witness = app.add_subcommand("witness", "function in H(src) outside H(dst)");
  witness->add_option("--src", src, "p,q,alpha")->required();
  witness->add_option("--dst", dst, "u,v,beta")->required();
  add_common(witness);

  auto* sweep = app.add_subcommand("sweep", "CSV of means at r = 1 - 2^-k");
  sweep->add_option("--f", f_spec, "function")->required();
  sweep->add_option("--p", p_text, "exponent p (rational or inf)");
  sweep->add_option("--k", k_range, "levels a..b");
  sweep->add_flag("--weighted", weighted, "emit (1-r)^alpha M_p instead of M_p");
  sweep->add_option("--alpha", alpha_text, "weight exponent for --weighted");
  add_common(sweep);

  auto* verify = app.add_subcommand("verify", "run estimate checks over a battery");
  verify->add_option("--checks", checks, "glob over check names");
  verify->add_option("--f", battery_specs, "battery function (repeatable; replaces the standard battery)");
  verify->add_option("--battery", battery_path, "file with one function per line (replaces the standard battery)");
  verify->add_option("--format", verify_format, "table or json")->check(CLI::IsMember({"table", "json"}));
  verify->add_option("--out", out_path, "write output to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Output out{out_path, {}};
  try {
    check_tolerance(tol);
    int code = kOk;

    if (*norm) {
      const auto f = parse_function(f_spec);
      const auto s = parse_space(space);
      const auto result = mnl::mixed_norm(f, s, tol);
      out.buffer << result.to_json().dump() << "\n";
      if (result.is_inconclusive()) code = kInconclusive;
    } else if (*mean) {
      const auto f = parse_function(f_spec);
      const auto p = parse_exponent(p_text);
      std::vector<double> radii;
      for (const auto& text : radii_text) {
        std::size_t used = 0;
        double r = 0.0;
        try {
          r = std::stod(text, &used);
        } catch (const std::logic_error&) {
          used = 0;
        }
        if (used != text.size() || !(r > 0.0 && r < 1.0)) throw UsageError("radius must be a number in (0, 1)");
        radii.push_back(r);
      }
      if (format == "csv") out.buffer << "r,mean,error\n";
      for (double r : radii) {
        const double m = mnl::integral_mean(f, p, r, tol);
        if (format == "csv") {
          out.buffer << mnl::format_double(r) << "," << mnl::format_double(m) << "," << mnl::format_double(tol * m)
                     << "\n";
        } else {
          nlohmann::json j{{"function", f.describe()}, {"p", p.str()}, {"r", r}, {"mean", m}, {"error", tol * m}};
          out.buffer << j.dump() << "\n";
        }
      }
    } else if (*include) {
      const auto verdict = mnl::decide_inclusion(parse_space(src), parse_space(dst));
      out.buffer << verdict.to_json().dump() << "\n";
      if (!verdict.included) code = kNotIncluded;
    } else if (*witness) {
      const auto a = parse_space(src);
      const auto b = parse_space(dst);
      const auto branch = mnl::classify_inclusion(a, b);
      if (mnl::is_included_branch(branch)) {
        throw UsageError("H(" + a.str() + ") is contained in H(" + b.str() + "); no witness exists");
      }
      const auto w = mnl::witness(a, b, branch);
      nlohmann::json j{{"branch", mnl::to_string(branch)},
                       {"witness", mnl::function_to_json(w)},
                       {"witness_spec", w.describe()},
                       {"membership_src", mnl::to_string(mnl::known_membership(w, a).status)},
                       {"membership_dst", mnl::to_string(mnl::known_membership(w, b).status)}};
      out.buffer << j.dump() << "\n";
    } else if (*sweep) {
      const auto f = parse_function(f_spec);
      const auto p = parse_exponent(p_text);
      const auto [a, b] = parse_range(k_range);
      double alpha = 0.0;
      if (weighted) {
        if (alpha_text.empty()) throw UsageError("--weighted needs --alpha");
        try {
          alpha = mnl::Rational::parse(alpha_text).to_double();
        } catch (const std::exception& e) {
          throw UsageError(std::string("bad alpha: ") + e.what());
        }
      }
      std::vector<double> radii;
      for (int k = a; k <= b; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k));
      const auto profile = mnl::mean_profile(f, p, radii, tol);
      out.buffer << (weighted ? "r,weighted_mean\n" : "r,mean,error\n");
      for (std::size_t i = 0; i < radii.size(); ++i) {
        out.buffer << mnl::format_double(radii[i]) << ",";
        if (profile.failed[i]) {
          out.buffer << "nan" << (weighted ? "" : ",nan") << "\n";
          code = kBudget;
        } else if (weighted) {
          out.buffer << mnl::format_double(std::pow(1.0 - radii[i], alpha) * profile.values[i]) << "\n";
        } else {
          out.buffer << mnl::format_double(profile.values[i]) << "," << mnl::format_double(profile.error_bounds[i])
                     << "\n";
        }
      }
    } else if (*verify) {
      std::vector<mnl::AnalyticFunction> battery;
      if (!battery_path.empty()) battery = read_battery(battery_path);
      for (const auto& spec : battery_specs) battery.push_back(parse_function(spec));
      if (battery_path.empty() && battery_specs.empty()) battery = mnl::standard_battery();
      if (battery.empty()) throw UsageError("the battery is empty");
      const auto reports = mnl::run_checks(checks, battery);
      if (reports.empty()) throw UsageError("no check matches '" + checks + "'");
      if (verify_format == "json") {
        for (const auto& r : reports) out.buffer << r.to_json().dump() << "\n";
      } else {
        out.buffer << mnl::format_table(reports);
      }
      for (const auto& r : reports) {
        if (r.unexpected()) code = kUnexpected;
      }
    }
    out.flush();
    return code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const mnl::ToleranceNotReached& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // Remaining failures come from numerical budgets (overflow of exact
    // arithmetic, lacunary term budgets surfaced as runtime errors).
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  }
}

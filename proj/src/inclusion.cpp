#include "mnl/inclusion.hpp"

#include <cmath>

#include "mnl/format.hpp"
#include "mnl/function_json.hpp"
#include "mnl/parallel.hpp"

namespace mnl {

namespace {

double rpow(const Rational& base, const Rational& exponent) { return std::pow(base.to_double(), exponent.to_double()); }

LacunaryRule lacunary_rule(Rational geometric, Rational poly_decay = Rational(0)) {
  LacunaryRule rule;
  rule.geometric = geometric;
  rule.poly_decay = poly_decay;
  return rule;
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::T1Strict: return "T1-strict";
    case Branch::T1Equal: return "T1-equal";
    case Branch::T2Strict: return "T2-strict";
    case Branch::T2Equal: return "T2-equal";
    case Branch::T1FailAlpha: return "T1-fail-alpha";
    case Branch::T1FailQ: return "T1-fail-q";
    case Branch::T2FailStrict: return "T2-fail-strict";
    case Branch::T2FailEqual: return "T2-fail-equal";
  }
  return "?";
}

bool is_included_branch(Branch b) {
  return b == Branch::T1Strict || b == Branch::T1Equal || b == Branch::T2Strict || b == Branch::T2Equal;
}

Branch classify_inclusion(const SpaceParams& src, const SpaceParams& dst) {
  if (src.p >= dst.p) {
    if (src.alpha < dst.alpha) return Branch::T1Strict;
    if (src.alpha > dst.alpha) return Branch::T1FailAlpha;
    return src.q <= dst.q ? Branch::T1Equal : Branch::T1FailQ;
  }
  const Rational a = src.critical_order();
  const Rational b = dst.critical_order();
  if (a < b) return Branch::T2Strict;
  if (a > b) return Branch::T2FailStrict;
  return src.q <= dst.q ? Branch::T2Equal : Branch::T2FailEqual;
}

InclusionVerdict decide_inclusion(const SpaceParams& src, const SpaceParams& dst) {
  InclusionVerdict v;
  v.branch = classify_inclusion(src, dst);
  v.included = is_included_branch(v.branch);
  if (v.included) {
    v.constant = embedding_constant(src, dst, v.branch);
  } else {
    v.witness = witness(src, dst, v.branch);
  }
  return v;
}

ConstantInfo embedding_constant(const SpaceParams& src, const SpaceParams& dst, Branch branch) {
  if (!is_included_branch(branch)) throw BranchMismatch(to_string(branch) + " is not an inclusion branch");
  if (classify_inclusion(src, dst) != branch) {
    throw BranchMismatch(to_string(branch) + " does not apply to " + src.str() + " -> " + dst.str());
  }
  const bool v_inf = dst.q.is_infinite();
  const Rational beta = dst.alpha;
  const Rational alpha = src.alpha;
  ConstantInfo c;
  switch (branch) {
    case Branch::T1Strict:
      if (v_inf) {
        c.formula = "1";
      } else {
        c.value = rpow(beta / (beta - alpha), dst.q.reciprocal());
        c.formula = "(beta/(beta-alpha))^(1/v)";
      }
      break;
    case Branch::T1Equal:
      if (v_inf) {
        c.formula = "1";
      } else {
        c.value = rpow(dst.q.value() / src.q.value(), dst.q.reciprocal());
        c.formula = "(v/q)^(1/v)";
      }
      break;
    case Branch::T2Strict: {
      // p < u, so p is finite and p/u = p * (1/u).
      const Rational exponent = Rational(1) - src.p.value() * dst.p.reciprocal();
      const double m_part = std::pow(point_evaluation_constant(src), exponent.to_double());
      if (v_inf) {
        c.value = m_part;
        c.formula = "m^(1-p/u)";
      } else {
        const Rational gap = beta - alpha + dst.p.reciprocal() - src.p.reciprocal();
        c.value = m_part * rpow(beta / gap, dst.q.reciprocal());
        c.formula = "m^(1-p/u)*(beta/(beta-alpha+1/u-1/p))^(1/v)";
      }
      break;
    }
    case Branch::T2Equal:
      c.kind = ConstantInfo::Kind::UpToUnknownFactor;
      if (v_inf) {
        c.formula = "C";
      } else {
        // q <= v < inf here.
        c.value = rpow(beta * dst.q.value() / (alpha * src.q.value()), dst.q.reciprocal());
        c.formula = "C*(beta*v/(alpha*q))^(1/v)";
      }
      break;
    default:
      break;
  }
  return c;
}

AnalyticFunction witness(const SpaceParams& src, const SpaceParams& dst, Branch branch) {
  if (is_included_branch(branch)) throw BranchMismatch(to_string(branch) + " is an inclusion branch");
  if (classify_inclusion(src, dst) != branch) {
    throw BranchMismatch(to_string(branch) + " does not apply to " + src.str() + " -> " + dst.str());
  }
  const bool v_inf = dst.q.is_infinite();
  switch (branch) {
    case Branch::T1FailAlpha:
      // sum 2^(n beta) z^(2^(n-1)) is bounded in the weighted sup norm, so for
      // v = inf take the geometric rate halfway between beta and alpha.
      return AnalyticFunction::lacunary(
          lacunary_rule(v_inf ? (src.alpha + dst.alpha) / Rational(2) : dst.alpha));
    case Branch::T1FailQ:
      // q > v, so v is finite.
      return AnalyticFunction::lacunary(lacunary_rule(src.alpha, dst.q.reciprocal()));
    case Branch::T2FailStrict: {
      const Rational target = dst.critical_order();
      return AnalyticFunction::power(v_inf ? (target + src.critical_order()) / Rational(2) : target);
    }
    case Branch::T2FailEqual:
      return AnalyticFunction::log_power(src.critical_order(), dst.q.reciprocal());
    default:
      break;
  }
  throw BranchMismatch("unreachable");
}

nlohmann::json ConstantInfo::to_json() const {
  nlohmann::json j;
  j["kind"] = is_explicit() ? "explicit" : "up_to_unknown_factor";
  j["formula"] = formula;
  if (is_explicit()) {
    j["value"] = value;
  } else {
    j["value"] = "C-dependent";
    j["known_factor"] = value;
  }
  return j;
}

nlohmann::json InclusionVerdict::to_json() const {
  nlohmann::json j;
  j["verdict"] = included ? "included" : "not_included";
  j["branch"] = to_string(branch);
  if (constant) j["constant"] = constant->to_json();
  if (witness) {
    j["witness"] = function_to_json(*witness);
    j["witness_spec"] = witness->describe();
  }
  return j;
}

std::string to_string(EmbeddingSample::Status s) {
  switch (s) {
    case EmbeddingSample::Status::Pass: return "pass";
    case EmbeddingSample::Status::Fail: return "fail";
    case EmbeddingSample::Status::Skipped: return "skipped";
    case EmbeddingSample::Status::Error: return "error";
  }
  return "?";
}

nlohmann::json EmbeddingReport::to_json() const {
  nlohmann::json j;
  j["src"] = src.str();
  j["dst"] = dst.str();
  j["constant"] = constant.to_json();
  j["tol"] = tol;
  j["max_ratio"] = max_ratio;
  j["pass"] = pass;
  auto& rows = j["samples"] = nlohmann::json::array();
  for (const auto& s : samples) {
    nlohmann::json row{{"function", s.function}, {"status", to_string(s.status)}};
    if (s.status == EmbeddingSample::Status::Pass || s.status == EmbeddingSample::Status::Fail) {
      row["ratio"] = s.ratio;
    }
    if (s.status != EmbeddingSample::Status::Error) row["src_norm"] = s.src_norm.to_json();
    if (s.status == EmbeddingSample::Status::Pass || s.status == EmbeddingSample::Status::Fail) {
      row["dst_norm"] = s.dst_norm.to_json();
    }
    if (!s.message.empty()) row["message"] = s.message;
    rows.push_back(std::move(row));
  }
  return j;
}

EmbeddingReport verify_embedding(const SpaceParams& src, const SpaceParams& dst,
                                 const std::vector<AnalyticFunction>& battery, double tol, const NormFunction& norm) {
  const InclusionVerdict verdict = decide_inclusion(src, dst);
  if (!verdict.included) throw BranchMismatch(src.str() + " is not contained in " + dst.str());
  if (!verdict.constant->is_explicit()) {
    throw BranchMismatch(to_string(verdict.branch) + " has no explicit embedding constant");
  }
  EmbeddingReport report{src, dst, *verdict.constant, tol, std::vector<EmbeddingSample>(battery.size()), 0.0, true};
  const NormFunction compute = norm ? norm : NormFunction([](const AnalyticFunction& f, const SpaceParams& s,
                                                                 double t) { return mixed_norm(f, s, t); });
  const double bound = report.constant.value * (1.0 + 4.0 * tol);
  parallel_for(battery.size(), [&](std::size_t i) {
    EmbeddingSample& sample = report.samples[i];
    sample.function = battery[i].describe();
    try {
      sample.src_norm = compute(battery[i], src, tol);
      if (!sample.src_norm.is_finite()) {
        sample.message = "source norm is " + to_string(sample.src_norm.kind);
        return;
      }
      sample.dst_norm = compute(battery[i], dst, tol);
      if (!sample.dst_norm.is_finite()) {
        sample.status = EmbeddingSample::Status::Fail;
        sample.message = "target norm is " + to_string(sample.dst_norm.kind);
        return;
      }
      if (sample.src_norm.value == 0.0) {
        sample.ratio = 0.0;
        sample.status = sample.dst_norm.value == 0.0 ? EmbeddingSample::Status::Pass : EmbeddingSample::Status::Fail;
        return;
      }
      sample.ratio = sample.dst_norm.value / sample.src_norm.value;
      sample.status = sample.ratio <= bound ? EmbeddingSample::Status::Pass : EmbeddingSample::Status::Fail;
    } catch (const std::exception& e) {
      sample.status = EmbeddingSample::Status::Error;
      sample.message = e.what();
    }
  });
  for (const auto& s : report.samples) {
    if (s.status == EmbeddingSample::Status::Pass || s.status == EmbeddingSample::Status::Fail) {
      report.max_ratio = std::max(report.max_ratio, s.ratio);
    }
    if (s.status == EmbeddingSample::Status::Fail) report.pass = false;
  }
  return report;
}

}  // namespace mnl

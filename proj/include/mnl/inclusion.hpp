#pragma once

// Decision procedure for H(p, q, alpha) ⊆ H(u, v, beta) with the constant of
// the embedding (when the proof yields one) or a function in the difference.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mnl/function_model.hpp"
#include "mnl/mixed_norm.hpp"
#include "mnl/space_params.hpp"

namespace mnl {

enum class Branch {
  T1Strict,
  T1Equal,
  T2Strict,
  T2Equal,
  T1FailAlpha,
  T1FailQ,
  T2FailStrict,
  T2FailEqual,
};

std::string to_string(Branch b);
bool is_included_branch(Branch b);

struct ConstantInfo {
  enum class Kind { Explicit, UpToUnknownFactor };

  Kind kind = Kind::Explicit;
  /// The whole constant (Explicit) or the part multiplying the unknown mean-comparison
  /// factor C (UpToUnknownFactor).
  double value = 1.0;
  /// Closed form the value was taken from, e.g. "(beta/(beta-alpha))^(1/v)".
  std::string formula;

  bool is_explicit() const { return kind == Kind::Explicit; }
  nlohmann::json to_json() const;
};

struct InclusionVerdict {
  bool included = false;
  Branch branch = Branch::T1Equal;
  std::optional<ConstantInfo> constant;
  std::optional<AnalyticFunction> witness;

  nlohmann::json to_json() const;
};

class BranchMismatch : public std::invalid_argument {
 public:
  explicit BranchMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Branch of the characterization that applies to (src, dst). Exact.
Branch classify_inclusion(const SpaceParams& src, const SpaceParams& dst);

InclusionVerdict decide_inclusion(const SpaceParams& src, const SpaceParams& dst);

/// Throws BranchMismatch for a NotIncluded branch or one that does not match (src, dst).
ConstantInfo embedding_constant(const SpaceParams& src, const SpaceParams& dst, Branch branch);

/// A member of src outside dst. For v = inf the functions from the
/// non-inclusion proofs lie in dst, so the exponent is moved to the midpoint of
/// the gap instead. Throws BranchMismatch for Included branches.
AnalyticFunction witness(const SpaceParams& src, const SpaceParams& dst, Branch branch);

struct EmbeddingSample {
  std::string function;
  NormResult src_norm;
  NormResult dst_norm;
  double ratio = 0.0;  // dst / src, valid when both norms are finite
  enum class Status { Pass, Fail, Skipped, Error } status = Status::Skipped;
  std::string message;
};

std::string to_string(EmbeddingSample::Status s);

struct EmbeddingReport {
  SpaceParams src;
  SpaceParams dst;
  ConstantInfo constant;
  double tol = 0.0;
  std::vector<EmbeddingSample> samples;  // battery order
  double max_ratio = 0.0;
  bool pass = true;  // no sample failed

  nlohmann::json to_json() const;
};

using NormFunction = std::function<NormResult(const AnalyticFunction&, const SpaceParams&, double)>;

/// Checks ||f||_dst <= C ||f||_src (1 + 4 tol) over the battery. Functions with
/// a non-finite source norm are skipped; quadrature errors are recorded per
/// sample and do not count as failures. Requires an Explicit constant.
/// `norm` replaces mixed_norm, e.g. with a memoizing wrapper.
EmbeddingReport verify_embedding(const SpaceParams& src, const SpaceParams& dst,
                                 const std::vector<AnalyticFunction>& battery, double tol = 1e-6,
                                 const NormFunction& norm = {});

}  // namespace mnl

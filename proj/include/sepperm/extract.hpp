#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sepperm/dist_fn.hpp"
#include "sepperm/excursion.hpp"
#include "sepperm/rng.hpp"
#include "sepperm/tree.hpp"

namespace sepperm {

/// Tree(f, x): recursive extraction splitting at the tied minima of the
/// interval minimum values between consecutive points. Points are sorted and
/// exact duplicates dropped; binary whenever the interval minima are distinct.
SchroderTree extract_tree(const Excursion& f, std::vector<double> points);

/// Which clause of the sign-consistency condition failed.
enum class ConditionCViolation : std::uint8_t {
  none,
  boundary_minimum,  // an interval minimum is attained at an endpoint, or no
                     // signed local minimum attains it
  sign_conflict,     // tied minima carry different signs
};

struct SignedExtraction {
  std::optional<SignedSchroderTree> tree;
  ConditionCViolation violation = ConditionCViolation::none;
  bool ok() const { return tree.has_value(); }
};

/// Tree±(f, s, x): as extract_tree, with each internal vertex carrying the
/// common sign of the local minima that realize it. Fails (without a tree)
/// when the condition above is violated.
SignedExtraction extract_signed_tree(const SignedExcursion& fs, std::vector<double> points);

struct PermExtraction {
  std::optional<Permutation> perm;
  ConditionCViolation violation = ConditionCViolation::none;
  bool ok() const { return perm.has_value(); }
};

/// Perm(f, s, x) = perm_of(Tree±(f, s, x)).
PermExtraction extract_perm(const SignedExcursion& fs, std::vector<double> points);

struct EstimatorResult {
  std::uint64_t trials = 0;
  std::uint64_t matches = 0;
  std::uint64_t condition_failures = 0;
  double estimate() const {
    return trials ? static_cast<double>(matches) / static_cast<double>(trials) : 0.0;
  }
  double failure_rate() const {
    return trials ? static_cast<double>(condition_failures) / static_cast<double>(trials) : 0.0;
  }
};

/// Monte Carlo estimate of PrTree(t0; f, F): probability that |t0| points
/// drawn i.i.d. from F (via the pseudo-inverse) extract exactly t0.
EstimatorResult pr_tree(const SchroderTree& t0, const Excursion& f,
                        const DistributionFunction& F, std::uint64_t trials, Rng& rng);

/// Monte Carlo estimate of PrPerm(pi; f, s, F). A sign-condition failure
/// counts as a non-match and is tallied separately.
EstimatorResult pr_perm(const Permutation& pi, const SignedExcursion& fs,
                        const DistributionFunction& F, std::uint64_t trials, Rng& rng);

/// Contour scaling constant: lambda^2 = 2 + 3/sqrt(2), kept exactly as
/// q + r*sqrt(2) with rational q, r. Diagnostic only.
struct ScalingConstant {
  // lambda^2 = 2 + (3/2) sqrt(2)
  static constexpr long square_rational_part_num = 2;
  static constexpr long square_rational_part_den = 1;
  static constexpr long square_sqrt2_coeff_num = 3;
  static constexpr long square_sqrt2_coeff_den = 2;
  static double value();
};

}  // namespace sepperm

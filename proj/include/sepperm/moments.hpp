#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sepperm/bigint.hpp"
#include "sepperm/permutation.hpp"

namespace sepperm {

/// Cached Catalan numbers Cat_k = C(2k,k)/(k+1).
class CatalanTable {
 public:
  const BigInt& cat(std::size_t k) const;

 private:
  mutable std::vector<BigInt> table_;
};

/// Number of signed binary trees mapping to pi: zero when pi is not
/// separable, otherwise the product of Cat_{deg(v)-1} over the internal
/// vertices of the decomposition tree.
BigInt n_pi(const Permutation& pi);

/// Limit of the expected pattern density: N_pi / (2^{k-1} Cat_{k-1}).
Rational expectation_lambda(const Permutation& pi);

/// Proportion of ordered set-partitions of [K] compatible with
/// (rho; pi_1,...,pi_r): blocks I_i with pat_{I_i}(rho) = pi_i.
Rational c_coeff(const Permutation& rho, const std::vector<Permutation>& patterns);

constexpr std::uint64_t kDefaultPairBudget = 10'000'000;

struct MomentBudgetExceeded : std::runtime_error {
  MomentBudgetExceeded(const BigInt& pairs, std::uint64_t budget)
      : std::runtime_error("joint_moment: enumeration needs " + pairs.get_str() +
                           " position/value partition pairs, budget is " +
                           std::to_string(budget)),
        pairs(pairs),
        budget(budget) {}
  BigInt pairs;
  std::uint64_t budget;
};

/// E[prod_i Lambda_{pi_i}], exact, by enumerating all pairs of ordered
/// set-partitions with block sizes |pi_i| and accumulating N_rho of the
/// induced permutations. Cost is multinomial(K;...)^2 pairs; refuses with
/// MomentBudgetExceeded above `max_pairs`.
Rational joint_moment(const std::vector<Permutation>& patterns,
                      std::uint64_t max_pairs = kDefaultPairBudget);

/// E[Lambda_pi^order].
Rational moment_lambda(const Permutation& pi, unsigned order,
                       std::uint64_t max_pairs = kDefaultPairBudget);

/// Second moment minus squared expectation.
Rational variance_lambda(const Permutation& pi, std::uint64_t max_pairs = kDefaultPairBudget);

}  // namespace sepperm

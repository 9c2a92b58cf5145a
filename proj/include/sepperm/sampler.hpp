#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sepperm/bigint.hpp"
#include "sepperm/rng.hpp"
#include "sepperm/tree.hpp"

namespace sepperm {

/// Exact counts of Schröder trees: schroder(n) = trees with n leaves,
/// forest(m) = nonempty ordered forests with m leaves total. Built once,
/// then read-only.
class CountTable {
 public:
  explicit CountTable(std::size_t max_n);

  std::size_t max_n() const { return schroder_.size() - 1; }
  const BigInt& schroder(std::size_t n) const { return schroder_.at(n); }
  const BigInt& forest(std::size_t m) const { return forest_.at(m); }

 private:
  std::vector<BigInt> schroder_;
  std::vector<BigInt> forest_;
};

/// Critical offspring law: nu(0) = 2 - sqrt(2), nu(1) = 0,
/// nu(i) = (1 - sqrt(2)/2)^(i-1) for i >= 2. Mean 1, variance 4(sqrt(2)-1).
class OffspringLaw {
 public:
  double pmf(std::uint32_t i) const;
  /// Closed-form inversion; the geometric tail is sampled by log inversion.
  std::uint32_t sample(Rng& rng) const;
};

/// Exactly uniform Schröder tree with n leaves. Dispatches between the two
/// exact methods below on size.
SchroderTree sample_schroder_tree(std::size_t n, Rng& rng);

/// Recursive-counting method: root arity and leaf-count composition drawn by
/// sequential conditional draws against the count tables. Requires
/// n <= table.max_n().
SchroderTree sample_schroder_tree_counting(const CountTable& table, std::size_t n, Rng& rng);

/// Conditioned-Lukasiewicz-walk method: draws the internal vertex count from
/// its exact law, a uniform composition for the jumps, a uniform arrangement,
/// and closes with the cycle-lemma rotation. Same law as the counting method;
/// near-linear per draw after cached O(n^2)-bit preprocessing.
SchroderTree sample_schroder_tree_walk(std::size_t n, Rng& rng);

/// Uniform separable permutation of size n: uniform tree, alternating signs
/// from a fair root sign, then perm_of.
Permutation sample_separable(std::size_t n, Rng& rng);

struct GwSample {
  SchroderTree tree;
  std::uint64_t attempts = 0;
};

struct GwBudgetExhausted : std::runtime_error {
  explicit GwBudgetExhausted(std::uint64_t attempts)
      : std::runtime_error("sample_gw_conditioned: attempt budget exhausted after " +
                           std::to_string(attempts) + " attempts"),
        attempts(attempts) {}
  std::uint64_t attempts;
};

/// Rejection sampler: Galton-Watson trees with the critical offspring law,
/// retried until the leaf count is n. Attempts that can no longer reach
/// exactly n leaves are aborted early.
GwSample sample_gw_conditioned(std::size_t n, Rng& rng, std::uint64_t max_attempts);

}  // namespace sepperm

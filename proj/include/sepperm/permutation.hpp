#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sepperm/bigint.hpp"
#include "sepperm/rng.hpp"

namespace sepperm {

/// Permutation of {1,...,n} in one-line notation, n >= 1. Immutable.
class Permutation {
 public:
  explicit Permutation(std::vector<std::uint32_t> values);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return values_.size(); }
  /// 1-based value at 1-based position.
  std::uint32_t at(std::size_t pos) const { return values_[pos - 1]; }
  const std::vector<std::uint32_t>& values() const { return values_; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.values_ == b.values_;
  }
  friend bool operator<(const Permutation& a, const Permutation& b) {
    return a.values_ < b.values_;
  }

 private:
  std::vector<std::uint32_t> values_;
};

/// pat_I(sigma): the pattern induced by sigma on the 1-based index set I
/// (given sorted, distinct, within range).
Permutation pattern_at(const Permutation& sigma, const std::vector<std::size_t>& indices);

/// Exact occurrence density: #{I : pat_I(sigma) = pi} / C(n,k).
/// Zero when |pi| > |sigma|. Full subset enumeration; meant for small sizes.
Rational occ_exact(const Permutation& pi, const Permutation& sigma);

/// Monte Carlo estimate of occ(pi, sigma) over `trials` uniform k-subsets.
double occ_sample(const Permutation& pi, const Permutation& sigma, std::uint64_t trials, Rng& rng);

Permutation direct_sum(const Permutation& a, const Permutation& b);
Permutation skew_sum(const Permutation& a, const Permutation& b);
Permutation direct_sum(const std::vector<Permutation>& parts);
Permutation skew_sum(const std::vector<Permutation>& parts);

/// True when sigma has no occurrence of tau.
bool avoids(const Permutation& sigma, const Permutation& tau);
/// Avoidance of both 2413 and 3142.
bool is_separable(const Permutation& sigma);

Permutation reverse(const Permutation& p);
Permutation complement(const Permutation& p);
Permutation inverse(const Permutation& p);

std::vector<Permutation> all_permutations(std::size_t n);
std::vector<Permutation> all_separable_permutations(std::size_t n);

/// Space-separated one-line notation, e.g. "3 2 1 4".
std::string to_string(const Permutation& p);
/// Digit form when every value is < 10 ("321"), space-separated otherwise.
std::string to_compact_string(const Permutation& p);
/// Accepts both forms emitted above.
Permutation parse_permutation(std::string_view text);

}  // namespace sepperm

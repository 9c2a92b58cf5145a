#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sepperm/bigint.hpp"
#include "sepperm/moments.hpp"
#include "sepperm/permutation.hpp"
#include "sepperm/sampler.hpp"
#include "sepperm/stats.hpp"
#include "sepperm/tree.hpp"

namespace sepperm {

/// Machine-readable outcome of one experiment run. Serialization is
/// deterministic: identical seed and parameters give identical bytes.
struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;

  struct Estimate {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
  };
  std::vector<Estimate> estimates;

  struct Reference {
    std::string name;
    double value = 0.0;
    std::string source;
  };
  std::vector<Reference> references;

  struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
  };
  std::vector<Check> checks;

  bool passed() const;
  void add_param(const std::string& key, const std::string& value);
  void add_param(const std::string& key, std::uint64_t value);
  void add_param(const std::string& key, double value);
  std::string to_json() const;
  std::string to_text() const;
};

/// Law of the conditional pattern-density of pi given a sampled signed
/// excursion: for each excursion, the inner Monte Carlo fraction of
/// point-draws whose extracted permutation equals pi.
struct LambdaEstimateResult {
  std::vector<double> samples;  // one per excursion
  double mean = 0.0;
  double second_moment = 0.0;
  double failure_rate = 0.0;
  ExperimentReport report;
};
LambdaEstimateResult lambda_estimate(const Permutation& pi, std::size_t n_excursions,
                                     std::size_t grid_m, std::uint64_t points_per_excursion,
                                     std::uint64_t seed, unsigned threads = 1);

/// Sampling distribution of estimated occ(pi, sigma_n) over uniform
/// separable sigma_n, with exact limit references when available.
struct OccDistributionResult {
  std::vector<double> samples;  // one per sampled permutation
  double mean = 0.0;
  double variance = 0.0;
  ExperimentReport report;
};
OccDistributionResult occ_distribution(const Permutation& pi, std::size_t n, std::size_t n_perms,
                                       std::uint64_t occ_trials, std::uint64_t seed,
                                       unsigned threads = 1);

/// Exact average of occ_exact(pi, sigma) over all separable sigma of size n.
Rational occ_mean_exact(const Permutation& pi, std::size_t n);

/// Exact maximum over separable sigma of size n of
/// |prod_i occ(pi_i, sigma) - sum_rho c^rho occ(rho, sigma)|.
struct DiscreteIdentityResult {
  Rational max_deviation;
  ExperimentReport report;
};
DiscreteIdentityResult discrete_moment_identity_check(const std::vector<Permutation>& patterns,
                                                      std::size_t n);

/// Shape distribution of the subtree induced by a uniform k-leaf subset of a
/// uniform size-n tree, against the uniform law on binary shapes.
struct TreeUniformityResult {
  std::vector<std::string> shapes;  // binary shapes, serialized
  std::vector<std::uint64_t> counts;
  std::uint64_t non_binary = 0;
  std::uint64_t trials = 0;
  Chi2Result chi2;
  ExperimentReport report;
};
TreeUniformityResult extracted_tree_uniformity(std::size_t k, std::size_t n, std::uint64_t trials,
                                               std::uint64_t seed, unsigned threads = 1,
                                               double alpha = 1e-3);

/// Distribution of induced sign assignments conditioned on the induced shape,
/// against the uniform law on the 2^(k-1) assignments, plus pairwise
/// independence of ancestor-height parities.
struct SignBalanceResult {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::vector<std::uint64_t> sign_counts;  // by sign-pattern index
  Chi2Result chi2;
  bool starved = false;
  double min_parity_independence_p = 1.0;
  ExperimentReport report;
};
SignBalanceResult sign_balance_test(const SchroderTree& shape, std::size_t n, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads = 1, double alpha = 1e-3);

/// Exact P(common-ancestor sign = +) for two uniform marked leaves of a
/// uniform size-n tree with alternating signs and a fair root sign, by
/// exhaustive enumeration. Small n only.
Rational exact_plus_ancestor_probability(std::size_t n);

/// sup_x |F_t(x) - x| evaluated exactly over the jump points.
double sup_leaf_deviation(const SchroderTree& t);

struct LeafUniformityResult {
  std::vector<double> sup_deviations;  // one per sampled tree
  double median = 0.0;
  ExperimentReport report;
};
LeafUniformityResult leaf_uniformity_stat(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                          unsigned threads = 1);

/// Exact cell masses of the permuton of sigma on an R x R grid.
/// Rows index y-bands from the bottom; columns index x-bands from the left.
class PermutonGrid {
 public:
  PermutonGrid(const Permutation& sigma, std::size_t resolution);

  std::size_t resolution() const { return r_; }
  const Rational& mass(std::size_t y_band, std::size_t x_band) const {
    return cells_.at(y_band * r_ + x_band);
  }
  Rational row_sum(std::size_t y_band) const;
  Rational col_sum(std::size_t x_band) const;
  Rational total_mass() const;
  /// One CSV line per y-band, bottom band first, decimal cell values.
  std::string to_csv() const;

 private:
  std::size_t r_;
  std::vector<Rational> cells_;
};

/// Runs fn(i, rng_i) for every i in [0, count) using the given worker count;
/// rng_i depends only on (seed, i), so results are thread-count independent.
void parallel_items(std::uint64_t count, unsigned threads, std::uint64_t seed,
                    const std::function<void(std::uint64_t, Rng&)>& fn);

}  // namespace sepperm

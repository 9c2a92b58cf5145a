#include "sepperm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace sepperm {

CountTable::CountTable(std::size_t max_n) {
  if (max_n < 1) throw std::invalid_argument("CountTable: max_n must be >= 1");
  schroder_.assign(max_n + 1, 0);
  forest_.assign(max_n + 1, 0);
  schroder_[1] = 1;
  forest_[1] = 1;
  // forest(m) = sum_{j < m} schroder(j) forest(m - j) + schroder(m);
  // schroder(m) = sum_{j < m} schroder(j) forest(m - j)  (first child + rest,
  // root arity = 1 + #trees in the rest, hence >= 2).
  for (std::size_t m = 2; m <= max_n; ++m) {
    BigInt conv = 0;
    for (std::size_t j = 1; j < m; ++j) conv += schroder_[j] * forest_[m - j];
    schroder_[m] = conv;
    forest_[m] = conv + schroder_[m];
  }
}

double OffspringLaw::pmf(std::uint32_t i) const {
  static const double kSqrt2 = std::sqrt(2.0);
  if (i == 0) return 2.0 - kSqrt2;
  if (i == 1) return 0.0;
  return std::pow(1.0 - kSqrt2 / 2.0, static_cast<int>(i) - 1);
}

std::uint32_t OffspringLaw::sample(Rng& rng) const {
  static const double kSqrt2 = std::sqrt(2.0);
  const double u = rng.uniform01();
  if (u < 2.0 - kSqrt2) return 0;
  // Conditioned on >= 2, (i - 2) is geometric with success 1 - q, q = 1 - sqrt(2)/2.
  const double q = 1.0 - kSqrt2 / 2.0;
  double v = rng.uniform01();
  if (v <= 0.0) v = std::numeric_limits<double>::min();
  return 2 + static_cast<std::uint32_t>(std::floor(std::log(v) / std::log(q)));
}

namespace {

// Emits the preorder arity sequence of a uniform tree with n leaves using the
// count tables; explicit work stack, so no recursion depth issues.
void counting_arities(const CountTable& table, std::size_t n, Rng& rng,
                      std::vector<std::uint32_t>& arities) {
  std::vector<std::size_t> stack{n};
  std::vector<std::size_t> sizes;
  while (!stack.empty()) {
    const std::size_t m = stack.back();
    stack.pop_back();
    if (m == 1) {
      arities.push_back(0);
      continue;
    }
    // Root decomposition: first child of size j with probability
    // schroder(j) forest(m-j) / schroder(m), then the remaining children are
    // peeled off the forest one at a time by the same kind of draw.
    BigInt r = uniform_below(table.schroder(m), rng);
    std::size_t first = 0;
    for (std::size_t j = 1; j < m; ++j) {
      const BigInt w = table.schroder(j) * table.forest(m - j);
      if (r < w) {
        first = j;
        break;
      }
      r -= w;
    }
    sizes.clear();
    sizes.push_back(first);
    std::size_t rest = m - first;
    while (rest > 0) {
      BigInt q = uniform_below(table.forest(rest), rng);
      if (q < table.schroder(rest)) {
        sizes.push_back(rest);
        break;
      }
      q -= table.schroder(rest);
      for (std::size_t j = 1; j < rest; ++j) {
        const BigInt w = table.schroder(j) * table.forest(rest - j);
        if (q < w) {
          sizes.push_back(j);
          rest -= j;
          break;
        }
        q -= w;
      }
    }
    arities.push_back(static_cast<std::uint32_t>(sizes.size()));
    for (auto sit = sizes.rbegin(); sit != sizes.rend(); ++sit) stack.push_back(*sit);
  }
}

// Shared preprocessing for the walk sampler at a fixed n: the exact internal
// vertex count law P(K) proportional to C(n+K-1, K) C(n-2, K-1), stored as
// chunked checkpoints so one draw only recomputes a short weight run.
struct WalkTables {
  std::size_t n = 0;
  std::size_t stride = 1;
  BigInt total;
  std::vector<BigInt> cum_before;  // cumulative weight before chunk start
  std::vector<BigInt> weight_at;   // V_K at chunk start
  std::vector<std::size_t> k_at;   // K at chunk start

  explicit WalkTables(std::size_t n_) : n(n_) {
    stride = std::max<std::size_t>(64, n / 256);
    BigInt v = static_cast<unsigned long>(n);  // V_1 = C(n,1) C(n-2,0)
    BigInt cum = 0;
    for (std::size_t k = 1; k + 1 <= n; ++k) {
      if (k > 1) {
        v *= static_cast<unsigned long>(n + k - 1);
        v *= static_cast<unsigned long>(n - k);
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k));
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k - 1));
      }
      if ((k - 1) % stride == 0) {
        cum_before.push_back(cum);
        weight_at.push_back(v);
        k_at.push_back(k);
      }
      cum += v;
    }
    total = cum;
  }

  std::size_t draw_internal_count(Rng& rng) const {
    const BigInt r = uniform_below(total, rng);
    // Last checkpoint with cum_before <= r, then walk the chunk.
    std::size_t lo = 0, hi = cum_before.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (cum_before[mid] <= r)
        lo = mid;
      else
        hi = mid;
    }
    BigInt cum = cum_before[lo];
    BigInt v = weight_at[lo];
    std::size_t k = k_at[lo];
    while (true) {
      cum += v;
      if (r < cum) return k;
      ++k;
      v *= static_cast<unsigned long>(n + k - 1);
      v *= static_cast<unsigned long>(n - k);
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k));
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k - 1));
    }
  }
};

std::shared_ptr<const WalkTables> walk_tables_for(std::size_t n) {
  thread_local std::map<std::size_t, std::shared_ptr<const WalkTables>> local;
  auto it = local.find(n);
  if (it != local.end()) return it->second;
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const WalkTables>> cache;
  std::shared_ptr<const WalkTables> built;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const WalkTables>(n);
    built = slot;
  }
  local[n] = built;
  return built;
}

std::shared_ptr<const CountTable> count_table_for(std::size_t n) {
  static std::mutex mu;
  static std::shared_ptr<const CountTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (!cache || cache->max_n() < n)
    cache = std::make_shared<const CountTable>(std::max<std::size_t>(n, 64));
  return cache;
}

constexpr std::size_t kCountingLimit = 512;

}  // namespace

SchroderTree sample_schroder_tree_counting(const CountTable& table, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_schroder_tree: n must be >= 1");
  if (n > table.max_n()) throw std::invalid_argument("sample_schroder_tree_counting: n beyond table");
  std::vector<std::uint32_t> arities;
  arities.reserve(2 * n);
  counting_arities(table, n, rng, arities);
  return SchroderTree::from_preorder_arities(arities);
}

SchroderTree sample_schroder_tree_walk(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_schroder_tree: n must be >= 1");
  if (n == 1) return SchroderTree::leaf();
  const auto tables = walk_tables_for(n);
  const std::size_t K = tables->draw_internal_count(rng);

  // Uniform composition of n-1 into K parts: K-1 bars among {1,...,n-2},
  // via a partial Fisher-Yates shuffle.
  std::vector<std::int64_t> steps;
  steps.reserve(n + K);
  {
    std::vector<std::size_t> pool(n - 2);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i + 1;
    for (std::size_t i = 0; i + 1 < K; ++i)
      std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.below(pool.size() - i))]);
    std::vector<std::size_t> bars(pool.begin(), pool.begin() + (K - 1));
    std::sort(bars.begin(), bars.end());
    bars.push_back(n - 1);
    std::size_t prev = 0;
    for (std::size_t b : bars) {
      steps.push_back(static_cast<std::int64_t>(b - prev));
      prev = b;
    }
  }
  for (std::size_t i = 0; i < n; ++i) steps.push_back(-1);

  // Uniform arrangement, then the unique nonnegative rotation (start right
  // after the first prefix-sum minimum).
  for (std::size_t i = steps.size(); i > 1; --i)
    std::swap(steps[i - 1], steps[rng.below(i)]);
  const std::size_t m = steps.size();
  std::int64_t sum = 0, min_sum = 0;
  std::size_t min_pos = m - 1;
  for (std::size_t i = 0; i < m; ++i) {
    sum += steps[i];
    if (sum < min_sum) {
      min_sum = sum;
      min_pos = i;
    }
  }
  std::vector<std::uint32_t> arities(m);
  for (std::size_t i = 0; i < m; ++i)
    arities[i] = static_cast<std::uint32_t>(steps[(min_pos + 1 + i) % m] + 1);
  return SchroderTree::from_preorder_arities(arities);
}

SchroderTree sample_schroder_tree(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_schroder_tree: n must be >= 1");
  if (n <= kCountingLimit) return sample_schroder_tree_counting(*count_table_for(n), n, rng);
  return sample_schroder_tree_walk(n, rng);
}

Permutation sample_separable(std::size_t n, Rng& rng) {
  SchroderTree t = sample_schroder_tree(n, rng);
  const Sign root = rng.coin() ? Sign::plus : Sign::minus;
  return perm_of(SignedSchroderTree::alternating(std::move(t), root));
}

GwSample sample_gw_conditioned(std::size_t n, Rng& rng, std::uint64_t max_attempts) {
  if (n == 0) throw std::invalid_argument("sample_gw_conditioned: n must be >= 1");
  const OffspringLaw nu;
  const std::size_t vertex_cap = 2 * n;  // any tree with n leaves has #t <= 2n - 1
  std::vector<std::uint32_t> arities;
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    arities.clear();
    std::size_t pending = 1, leaves = 0;
    bool ok = true;
    while (pending > 0) {
      if (arities.size() >= vertex_cap || leaves > n) {
        ok = false;
        break;
      }
      const std::uint32_t c = nu.sample(rng);
      arities.push_back(c);
      if (c == 0) ++leaves;
      pending += c;
      --pending;
    }
    if (ok && leaves == n) return {SchroderTree::from_preorder_arities(arities), attempt};
  }
  throw GwBudgetExhausted(max_attempts);
}

}  // namespace sepperm

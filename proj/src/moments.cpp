#include "sepperm/moments.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "sepperm/tree.hpp"

namespace sepperm {

const BigInt& CatalanTable::cat(std::size_t k) const {
  while (table_.size() <= k) table_.push_back(catalan(table_.size()));
  return table_[k];
}

BigInt n_pi(const Permutation& pi) {
  try {
    const SignedSchroderTree dec = decomposition_tree(pi);
    BigInt prod = 1;
    for (SchroderTree::Vertex v = 0; v < dec.tree().vertex_count(); ++v)
      if (!dec.tree().is_leaf(v)) prod *= catalan(dec.tree().arity(v) - 1);
    return prod;
  } catch (const NotSeparableError&) {
    return 0;
  }
}

Rational expectation_lambda(const Permutation& pi) {
  const std::size_t k = pi.size();
  return Rational(n_pi(pi), pow2(k - 1) * catalan(k - 1));
}

namespace {

// All distinct arrangements of the block-index multiset {1^{k_1},...,r^{k_r}};
// each arrangement is one ordered set-partition with the given block sizes.
std::vector<std::vector<std::uint8_t>> block_assignments(const std::vector<std::size_t>& sizes) {
  std::vector<std::uint8_t> base;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    base.insert(base.end(), sizes[i], static_cast<std::uint8_t>(i));
  std::sort(base.begin(), base.end());
  std::vector<std::vector<std::uint8_t>> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

// Positions of each block in increasing order, from one assignment vector.
std::vector<std::vector<std::uint8_t>> blocks_of(const std::vector<std::uint8_t>& assign,
                                                 std::size_t r) {
  std::vector<std::vector<std::uint8_t>> blocks(r);
  for (std::uint8_t p = 0; p < assign.size(); ++p) blocks[assign[p]].push_back(p);
  return blocks;
}

std::uint64_t pack_values(const std::vector<std::uint32_t>& v) {
  std::uint64_t key = 0;
  for (auto x : v) key = (key << 5) | x;
  return key;
}

}  // namespace

Rational c_coeff(const Permutation& rho, const std::vector<Permutation>& patterns) {
  if (patterns.empty()) throw std::invalid_argument("c_coeff: need at least one pattern");
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& p : patterns) {
    sizes.push_back(p.size());
    total += p.size();
  }
  if (total != rho.size()) throw std::invalid_argument("c_coeff: pattern sizes must sum to |rho|");
  const auto assignments = block_assignments(sizes);
  BigInt compatible = 0;
  std::vector<std::size_t> idx;
  for (const auto& assign : assignments) {
    const auto blocks = blocks_of(assign, patterns.size());
    bool ok = true;
    for (std::size_t i = 0; i < patterns.size() && ok; ++i) {
      idx.clear();
      for (auto p : blocks[i]) idx.push_back(static_cast<std::size_t>(p) + 1);
      ok = pattern_at(rho, idx) == patterns[i];
    }
    if (ok) ++compatible;
  }
  return Rational(compatible, BigInt(static_cast<long>(assignments.size())));
}

Rational joint_moment(const std::vector<Permutation>& patterns, std::uint64_t max_pairs) {
  if (patterns.empty()) throw std::invalid_argument("joint_moment: need at least one pattern");
  std::vector<std::uint64_t> sizes;
  std::size_t total = 0;
  for (const auto& p : patterns) {
    sizes.push_back(p.size());
    total += p.size();
  }
  if (total > 12)
    throw std::invalid_argument("joint_moment: total pattern size above 12 is unsupported");
  const BigInt m_big = multinomial(sizes);
  const BigInt pair_count = m_big * m_big;
  if (pair_count > BigInt(static_cast<unsigned long>(max_pairs)))
    throw MomentBudgetExceeded(pair_count, max_pairs);

  std::vector<std::size_t> sz(sizes.begin(), sizes.end());
  const auto assignments = block_assignments(sz);
  const std::size_t r = patterns.size();
  // Sorted block positions per assignment, reused on both the position and
  // value sides of the pair enumeration.
  std::vector<std::vector<std::vector<std::uint8_t>>> all_blocks;
  all_blocks.reserve(assignments.size());
  for (const auto& a : assignments) all_blocks.push_back(blocks_of(a, r));

  // rho(Pos, Val) sends the j-th smallest position of block i to the
  // pi_i(j)-th smallest value of block i. Accumulate N_rho over all pairs;
  // the expectation denominator is constant across rho.
  std::unordered_map<std::uint64_t, std::uint64_t> npi_cache;
  BigInt total_npi = 0;
  std::uint64_t chunk = 0;
  std::vector<std::uint32_t> rho_vals(total);
  for (const auto& pos : all_blocks) {
    for (const auto& val : all_blocks) {
      for (std::size_t i = 0; i < r; ++i) {
        const auto& pb = pos[i];
        const auto& vb = val[i];
        const auto& pi_v = patterns[i].values();
        for (std::size_t j = 0; j < pb.size(); ++j)
          rho_vals[pb[j]] = static_cast<std::uint32_t>(vb[pi_v[j] - 1]) + 1;
      }
      const std::uint64_t key = pack_values(rho_vals);
      auto it = npi_cache.find(key);
      std::uint64_t npi_val;
      if (it == npi_cache.end()) {
        npi_val = n_pi(Permutation(rho_vals)).get_ui();
        npi_cache.emplace(key, npi_val);
      } else {
        npi_val = it->second;
      }
      chunk += npi_val;
      if (chunk >= (1ull << 62)) {
        total_npi += chunk;
        chunk = 0;
      }
    }
  }
  total_npi += chunk;
  // Each rho is constructed from exactly d^rho (Pos, Val) pairs, so the sum
  // of N_rho over pairs is sum_rho d^rho N_rho; dividing by the number of
  // ordered set-partitions and by the expectation denominator yields
  // sum_rho c^rho E[Lambda_rho].
  return Rational(total_npi, m_big * pow2(total - 1) * catalan(total - 1));
}

Rational moment_lambda(const Permutation& pi, unsigned order, std::uint64_t max_pairs) {
  if (order == 0) throw std::invalid_argument("moment_lambda: order must be >= 1");
  return joint_moment(std::vector<Permutation>(order, pi), max_pairs);
}

Rational variance_lambda(const Permutation& pi, std::uint64_t max_pairs) {
  const Rational mean = expectation_lambda(pi);
  return moment_lambda(pi, 2, max_pairs) - mean * mean;
}

}  // namespace sepperm

#include "sepperm/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sepperm {

Permutation::Permutation(std::vector<std::uint32_t> values) : values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n == 0) throw std::invalid_argument("Permutation: size must be >= 1");
  std::vector<bool> seen(n + 1, false);
  for (auto v : values_) {
    if (v < 1 || v > n || seen[v])
      throw std::invalid_argument("Permutation: values must be a permutation of 1..n");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 1u);
  return Permutation(std::move(v));
}

Permutation pattern_at(const Permutation& sigma, const std::vector<std::size_t>& indices) {
  const std::size_t n = sigma.size();
  if (indices.empty()) throw std::invalid_argument("pattern_at: empty index set");
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 1 || indices[j] > n) throw std::out_of_range("pattern_at: index out of range");
    if (j > 0 && indices[j] <= indices[j - 1])
      throw std::invalid_argument("pattern_at: indices must be sorted and distinct");
  }
  const std::size_t k = indices.size();
  std::vector<std::uint32_t> picked(k);
  for (std::size_t j = 0; j < k; ++j) picked[j] = sigma.at(indices[j]);
  std::vector<std::uint32_t> ranks(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uint32_t r = 1;
    for (std::size_t j = 0; j < k; ++j)
      if (picked[j] < picked[i]) ++r;
    ranks[i] = r;
  }
  return Permutation(std::move(ranks));
}

namespace {

// Relative-order match of sigma on positions idx (0-based) against pi, no allocation.
bool subset_matches(const Permutation& pi, const Permutation& sigma,
                    const std::vector<std::size_t>& idx) {
  const std::size_t k = idx.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if ((sigma.values()[idx[i]] < sigma.values()[idx[j]]) !=
          (pi.values()[i] < pi.values()[j]))
        return false;
  return true;
}

// Enumerates k-subsets of {0,...,n-1} in lexicographic order.
bool next_subset(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (idx[i] != i + n - k) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Rational occ_exact(const Permutation& pi, const Permutation& sigma) {
  const std::size_t k = pi.size(), n = sigma.size();
  if (k > n) return Rational(0);
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  BigInt hits = 0;
  do {
    if (subset_matches(pi, sigma, idx)) ++hits;
  } while (next_subset(idx, n));
  return Rational(hits, binomial(n, k));
}

double occ_sample(const Permutation& pi, const Permutation& sigma, std::uint64_t trials,
                  Rng& rng) {
  const std::size_t k = pi.size(), n = sigma.size();
  if (trials == 0) throw std::invalid_argument("occ_sample: trials must be >= 1");
  if (k > n) throw std::invalid_argument("occ_sample: |pi| must be <= |sigma|");
  std::vector<std::size_t> idx(k);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Floyd's algorithm for a uniform k-subset, then sort.
    idx.clear();
    for (std::size_t j = n - k; j < n; ++j) {
      const std::size_t x = static_cast<std::size_t>(rng.below(j + 1));
      if (std::find(idx.begin(), idx.end(), x) == idx.end())
        idx.push_back(x);
      else
        idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end());
    if (subset_matches(pi, sigma, idx)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

Permutation direct_sum(const Permutation& a, const Permutation& b) {
  std::vector<std::uint32_t> v = a.values();
  const auto k = static_cast<std::uint32_t>(a.size());
  for (auto x : b.values()) v.push_back(x + k);
  return Permutation(std::move(v));
}

Permutation skew_sum(const Permutation& a, const Permutation& b) {
  std::vector<std::uint32_t> v;
  v.reserve(a.size() + b.size());
  const auto l = static_cast<std::uint32_t>(b.size());
  for (auto x : a.values()) v.push_back(x + l);
  for (auto x : b.values()) v.push_back(x);
  return Permutation(std::move(v));
}

Permutation direct_sum(const std::vector<Permutation>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum: empty list");
  Permutation r = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) r = direct_sum(r, parts[i]);
  return r;
}

Permutation skew_sum(const std::vector<Permutation>& parts) {
  if (parts.empty()) throw std::invalid_argument("skew_sum: empty list");
  Permutation r = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) r = skew_sum(r, parts[i]);
  return r;
}

bool avoids(const Permutation& sigma, const Permutation& tau) {
  const std::size_t k = tau.size(), n = sigma.size();
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  do {
    if (subset_matches(tau, sigma, idx)) return false;
  } while (next_subset(idx, n));
  return true;
}

bool is_separable(const Permutation& sigma) {
  static const Permutation kForbidden1({2, 4, 1, 3});
  static const Permutation kForbidden2({3, 1, 4, 2});
  return avoids(sigma, kForbidden1) && avoids(sigma, kForbidden2);
}

Permutation reverse(const Permutation& p) {
  std::vector<std::uint32_t> v(p.values().rbegin(), p.values().rend());
  return Permutation(std::move(v));
}

Permutation complement(const Permutation& p) {
  const auto n = static_cast<std::uint32_t>(p.size());
  std::vector<std::uint32_t> v;
  v.reserve(n);
  for (auto x : p.values()) v.push_back(n + 1 - x);
  return Permutation(std::move(v));
}

Permutation inverse(const Permutation& p) {
  std::vector<std::uint32_t> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[p.values()[i] - 1] = static_cast<std::uint32_t>(i + 1);
  return Permutation(std::move(v));
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 1u);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::vector<Permutation> all_separable_permutations(std::size_t n) {
  std::vector<Permutation> out;
  for (auto& p : all_permutations(n))
    if (is_separable(p)) out.push_back(std::move(p));
  return out;
}

std::string to_string(const Permutation& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(p.values()[i]);
  }
  return s;
}

std::string to_compact_string(const Permutation& p) {
  bool small = true;
  for (auto v : p.values())
    if (v >= 10) small = false;
  if (!small) return to_string(p);
  std::string s;
  for (auto v : p.values()) s += static_cast<char>('0' + v);
  return s;
}

Permutation parse_permutation(std::string_view text) {
  std::string t(text);
  const bool has_space = t.find_first_of(" \t") != std::string::npos;
  std::vector<std::uint32_t> v;
  if (has_space) {
    std::istringstream in(t);
    unsigned long x;
    while (in >> x) v.push_back(static_cast<std::uint32_t>(x));
    if (!in.eof()) throw std::invalid_argument("parse_permutation: malformed input");
  } else {
    for (char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("parse_permutation: malformed input");
      v.push_back(static_cast<std::uint32_t>(c - '0'));
    }
  }
  if (v.empty()) throw std::invalid_argument("parse_permutation: empty input");
  return Permutation(std::move(v));
}

}  // namespace sepperm

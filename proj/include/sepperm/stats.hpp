#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sepperm {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
/// Series for x < a+1, Lentz continued fraction otherwise.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

struct Chi2Result {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;

  bool passes(double alpha) const { return p_value > alpha; }
};

/// Goodness of fit against given cell probabilities.
inline Chi2Result chi_square_gof(const std::vector<std::uint64_t>& counts,
                                 const std::vector<double>& probs) {
  if (counts.size() != probs.size() || counts.size() < 2)
    throw std::invalid_argument("chi_square_gof: need >= 2 matching cells");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("chi_square_gof: empty sample");
  Chi2Result r;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = static_cast<double>(total) * probs[i];
    if (expected <= 0.0) throw std::invalid_argument("chi_square_gof: zero expected count");
    const double d = static_cast<double>(counts[i]) - expected;
    r.stat += d * d / expected;
  }
  r.dof = static_cast<int>(counts.size()) - 1;
  r.p_value = gamma_q(r.dof / 2.0, r.stat / 2.0);
  return r;
}

/// Two-sample homogeneity test over the same cells.
inline Chi2Result chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                        const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("chi_square_two_sample: need >= 2 matching cells");
  double na = 0, nb = 0;
  for (auto c : a) na += static_cast<double>(c);
  for (auto c : b) nb += static_cast<double>(c);
  if (na == 0 || nb == 0) throw std::invalid_argument("chi_square_two_sample: empty sample");
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  Chi2Result r;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = static_cast<double>(a[i]), bi = static_cast<double>(b[i]);
    if (ai + bi == 0) continue;
    const double d = ka * ai - kb * bi;
    r.stat += d * d / (ai + bi);
    ++cells;
  }
  r.dof = cells - 1;
  r.p_value = gamma_q(r.dof / 2.0, r.stat / 2.0);
  return r;
}

/// 2x2 independence test from joint counts n[i][j].
inline Chi2Result chi_square_independence_2x2(std::uint64_t n00, std::uint64_t n01,
                                              std::uint64_t n10, std::uint64_t n11) {
  const double n = static_cast<double>(n00 + n01 + n10 + n11);
  if (n == 0) throw std::invalid_argument("chi_square_independence_2x2: empty sample");
  const double r0 = static_cast<double>(n00 + n01), r1 = static_cast<double>(n10 + n11);
  const double c0 = static_cast<double>(n00 + n10), c1 = static_cast<double>(n01 + n11);
  Chi2Result r;
  r.dof = 1;
  if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0) {
    r.stat = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const double det = static_cast<double>(n00) * static_cast<double>(n11) -
                     static_cast<double>(n01) * static_cast<double>(n10);
  r.stat = n * det * det / (r0 * r1 * c0 * c1);
  r.p_value = gamma_q(0.5, r.stat / 2.0);
  return r;
}

/// Mergeable count / sum / sum-of-squares accumulator.
struct RunningStats {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const RunningStats& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double second_moment() const { return n ? sum_sq / static_cast<double>(n) : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
  }
  double std_error() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median_of: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return (v.size() % 2) ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace sepperm

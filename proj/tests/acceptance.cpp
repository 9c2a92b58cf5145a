// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Statistical criteria run with fixed seeds at alpha = 0.001.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sepperm/experiments.hpp"
#include "sepperm/extract.hpp"
#include "sepperm/moments.hpp"
#include "sepperm/sampler.hpp"
#include "sepperm/stats.hpp"

using namespace sepperm;

namespace {

constexpr unsigned kThreads = 2;
int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %02d %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <typename F>
void criterion(int id, const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << detail << (detail.empty() ? "" : " ") << "(" << std::fixed << secs << "s)";
  report(id, name, pass, os.str());
}

Permutation p(std::initializer_list<std::uint32_t> v) {
  return Permutation(std::vector<std::uint32_t>(v));
}

bool check_eq(std::string& detail, const std::string& label, const Rational& got,
              const Rational& want) {
  if (got == want) return true;
  detail += label + " got " + got.str() + " want " + want.str() + "; ";
  return false;
}

}  // namespace

int main() {
  std::printf("acceptance suite: exact values bit-for-bit, statistics at alpha = 0.001\n");

  criterion(1, "limit expectations of the eight small patterns", [](std::string& d) {
    bool ok = true;
    ok &= check_eq(d, "12", expectation_lambda(p({1, 2})), Rational(1, 2));
    ok &= check_eq(d, "21", expectation_lambda(p({2, 1})), Rational(1, 2));
    ok &= check_eq(d, "123", expectation_lambda(p({1, 2, 3})), Rational(1, 4));
    ok &= check_eq(d, "321", expectation_lambda(p({3, 2, 1})), Rational(1, 4));
    ok &= check_eq(d, "132", expectation_lambda(p({1, 3, 2})), Rational(1, 8));
    ok &= check_eq(d, "213", expectation_lambda(p({2, 1, 3})), Rational(1, 8));
    ok &= check_eq(d, "231", expectation_lambda(p({2, 3, 1})), Rational(1, 8));
    ok &= check_eq(d, "312", expectation_lambda(p({3, 1, 2})), Rational(1, 8));
    return ok;
  });

  criterion(2, "signed binary tree counts vs exhaustive census", [](std::string& d) {
    if (n_pi(p({1, 3, 2, 4, 7, 6, 5})) != 10) {
      d += "n_pi(1324765) != 10; ";
      return false;
    }
    for (std::size_t k = 1; k <= 6; ++k) {
      std::map<std::string, std::uint64_t> census;
      for (const auto& shape : enumerate_binary_trees(k)) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
          std::vector<Sign> signs(shape.vertex_count(), Sign::plus);
          std::size_t bit = 0;
          for (SchroderTree::Vertex v = 0; v < shape.vertex_count(); ++v) {
            if (shape.is_leaf(v)) continue;
            signs[v] = (mask >> bit++) & 1 ? Sign::plus : Sign::minus;
          }
          ++census[to_string(perm_of(SignedSchroderTree(shape, std::move(signs))))];
        }
      }
      for (const auto& pi : all_permutations(k)) {
        auto it = census.find(to_string(pi));
        const BigInt want =
            it == census.end() ? BigInt(0) : BigInt(static_cast<unsigned long>(it->second));
        if (n_pi(pi) != want) {
          d += "mismatch at " + to_compact_string(pi) + "; ";
          return false;
        }
      }
    }
    return true;
  });

  criterion(3, "compatible set-partition proportion", [](std::string& d) {
    return check_eq(d, "c(1342;21,12)", c_coeff(p({1, 3, 4, 2}), {p({2, 1}), p({1, 2})}),
                    Rational(1, 3));
  });

  criterion(4, "limit moments of small pattern densities", [](std::string& d) {
    bool ok = true;
    ok &= check_eq(d, "m2", moment_lambda(p({1, 2}), 2), Rational(17, 60));
    ok &= check_eq(d, "m3", moment_lambda(p({1, 2}), 3), Rational(7, 40));
    ok &= check_eq(d, "m4", moment_lambda(p({1, 2}), 4), Rational(6361, 55440));
    ok &= check_eq(d, "var12", variance_lambda(p({1, 2})), Rational(1, 30));
    ok &= check_eq(d, "var132", variance_lambda(p({1, 3, 2})), Rational(3, 560));
    ok &= check_eq(d, "joint(12,123)", joint_moment({p({1, 2}), p({1, 2, 3})}),
                   Rational(43, 280));
    return ok;
  });

  criterion(5, "decomposition round trip over all separable sizes <= 8", [](std::string& d) {
    const std::size_t counts[] = {1, 2, 6, 22, 90, 394, 1806, 8558};
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto seps = all_separable_permutations(n);
      if (seps.size() != counts[n - 1]) {
        d += "separable count at n=" + std::to_string(n) + " is " +
             std::to_string(seps.size()) + "; ";
        return false;
      }
      for (const auto& sigma : seps) {
        if (!(perm_of(decomposition_tree(sigma)) == sigma)) {
          d += "round trip failed at " + to_string(sigma) + "; ";
          return false;
        }
      }
      if (n > 6) continue;
      for (const auto& sigma : all_permutations(n)) {
        bool threw = false;
        try {
          (void)decomposition_tree(sigma);
        } catch (const NotSeparableError&) {
          threw = true;
        }
        if (threw == is_separable(sigma)) {
          d += "separability disagreement at " + to_string(sigma) + "; ";
          return false;
        }
      }
    }
    d += "8558 separable permutations at n=8;";
    return true;
  });

  criterion(6, "expectations sum to one over each pattern size <= 4", [](std::string& d) {
    for (std::size_t k = 1; k <= 4; ++k) {
      Rational total;
      for (const auto& pi : all_permutations(k)) total += expectation_lambda(pi);
      if (total != Rational(1)) {
        d += "sum at k=" + std::to_string(k) + " is " + total.str() + "; ";
        return false;
      }
    }
    return true;
  });

  criterion(7, "sampler uniformity and cross-sampler agreement, n <= 5", [](std::string& d) {
    Rng rng(7101);
    for (std::size_t n = 2; n <= 5; ++n) {
      std::map<std::string, std::uint64_t> freq;
      const std::uint64_t draws = 100000;
      for (std::uint64_t i = 0; i < draws; ++i) ++freq[to_string(sample_separable(n, rng))];
      const auto seps = all_separable_permutations(n);
      std::vector<std::uint64_t> counts;
      for (const auto& s : seps) counts.push_back(freq[to_string(s)]);
      const auto r =
          chi_square_gof(counts, std::vector<double>(seps.size(), 1.0 / seps.size()));
      if (!r.passes(1e-3)) {
        d += "perm chi2 fail at n=" + std::to_string(n) + " p=" + std::to_string(r.p_value) +
             "; ";
        return false;
      }
      const auto trees = enumerate_schroder_trees(n);
      std::map<std::string, std::uint64_t> f_gw, f_exact;
      for (int i = 0; i < 10000; ++i) {
        ++f_gw[to_string(sample_gw_conditioned(n, rng, 10000000).tree)];
        ++f_exact[to_string(sample_schroder_tree(n, rng))];
      }
      std::vector<std::uint64_t> c1, c2;
      for (const auto& t : trees) {
        c1.push_back(f_gw[to_string(t)]);
        c2.push_back(f_exact[to_string(t)]);
      }
      if (trees.size() >= 2) {
        const auto r2 = chi_square_two_sample(c1, c2);
        if (!r2.passes(1e-3)) {
          d += "two-sample chi2 fail at n=" + std::to_string(n) +
               " p=" + std::to_string(r2.p_value) + "; ";
          return false;
        }
      }
    }
    return true;
  });

  criterion(8, "occ distribution at n = 1e5 and exact small-size means", [](std::string& d) {
    for (std::size_t n = 2; n <= 7; ++n) {
      const Rational mean = occ_mean_exact(p({1, 2}), n);
      if (mean != Rational(1, 2)) {
        d += "exact mean at n=" + std::to_string(n) + " is " + mean.str() + "; ";
        return false;
      }
    }
    const auto r = occ_distribution(p({1, 2, 3}), 100000, 240, 3000, 8101, kThreads);
    std::ostringstream os;
    os << "mean " << r.mean << " vs 0.25";
    d += os.str();
    return std::abs(r.mean - 0.25) < 0.02;
  });

  criterion(9, "law of the limit density of 12 from sampled excursions", [](std::string& d) {
    const auto r = lambda_estimate(p({1, 2}), 2000, 1 << 12, 10000, 9101, kThreads);
    std::ostringstream os;
    os << "mean " << r.mean << " vs 0.5, second moment " << r.second_moment << " vs "
       << 17.0 / 60 << ", failure rate " << r.failure_rate;
    d += os.str();
    return std::abs(r.mean - 0.5) < 0.02 && std::abs(r.second_moment - 17.0 / 60) < 0.01;
  });

  criterion(10, "extracted subtree shapes are uniform at n = 1e4", [](std::string& d) {
    const auto r3 = extracted_tree_uniformity(3, 10000, 100000, 10101, kThreads);
    const auto r4 = extracted_tree_uniformity(4, 10000, 30000, 10102, kThreads);
    std::ostringstream os;
    os << "k=3 p=" << r3.chi2.p_value << ", k=4 p=" << r4.chi2.p_value;
    d += os.str();
    return r3.chi2.passes(1e-3) && r4.chi2.passes(1e-3);
  });

  criterion(11, "induced sign assignments are balanced at n = 1e4", [](std::string& d) {
    const auto r = sign_balance_test(parse_tree("((L L) L)"), 10000, 40000, 11101, kThreads);
    std::ostringstream os;
    os << "hits " << r.hits << ", chi2 p=" << r.chi2.p_value
       << ", parity min p=" << r.min_parity_independence_p;
    d += os.str();
    return !r.starved && r.chi2.passes(1e-3) && r.min_parity_independence_p > 1e-3;
  });

  criterion(12, "discrete moment identity deviation shrinks with n", [](std::string& d) {
    Rational prev;
    bool first = true;
    for (std::size_t n = 5; n <= 8; ++n) {
      const auto r = discrete_moment_identity_check({p({1, 2}), p({1, 2})}, n);
      d += "n=" + std::to_string(n) + ": " + r.max_deviation.str() + "; ";
      if (!first && !(r.max_deviation < prev)) return false;
      prev = r.max_deviation;
      first = false;
    }
    return true;
  });

  criterion(13, "leaf CDF sup deviation decreases across sizes", [](std::string& d) {
    const auto r2 = leaf_uniformity_stat(100, 200, 13101, kThreads);
    const auto r3 = leaf_uniformity_stat(1000, 200, 13102, kThreads);
    const auto r4 = leaf_uniformity_stat(10000, 200, 13103, kThreads);
    std::ostringstream os;
    os << "medians " << r2.median << " > " << r3.median << " > " << r4.median;
    d += os.str();
    return r2.median > r3.median && r3.median > r4.median;
  });

  criterion(14, "permuton grid marginals are exactly uniform", [](std::string& d) {
    Rng rng(14101);
    for (std::size_t R : {1, 2, 7}) {
      for (int rep = 0; rep < 3; ++rep) {
        const Permutation sigma = sample_separable(4 + rng.below(8), rng);
        const PermutonGrid grid(sigma, R);
        if (grid.total_mass() != Rational(1)) {
          d += "total mass off at R=" + std::to_string(R) + "; ";
          return false;
        }
        for (std::size_t b = 0; b < R; ++b) {
          if (grid.row_sum(b) != Rational(1, static_cast<long>(R)) ||
              grid.col_sum(b) != Rational(1, static_cast<long>(R))) {
            d += "marginal off at R=" + std::to_string(R) + " band " + std::to_string(b) +
                 "; ";
            return false;
          }
        }
      }
    }
    return true;
  });

  std::printf("%s: %d of 14 criteria passed\n", failures == 0 ? "SUCCESS" : "FAILURE",
              14 - failures);
  return failures == 0 ? 0 : 1;
}

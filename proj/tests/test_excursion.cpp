#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "sepperm/extract.hpp"
#include "sepperm/sampler.hpp"
#include "sepperm/stats.hpp"

using namespace sepperm;

namespace {

Permutation p(std::initializer_list<std::uint32_t> v) {
  return Permutation(std::vector<std::uint32_t>(v));
}

// Four marked points with interval minima 0.30 (+), 0.20 (+), 0.05 (-);
// extraction yields the left-comb signed tree of 2341.
Excursion four_point_excursion() {
  return Excursion({0, 0.40, 0.90, 0.85, 0.30, 0.95, 0.92, 0.88, 0.20, 0.91, 0.97,
                    0.93, 0.50, 0.05, 0.60, 0.955, 0.965, 0.80, 0.55, 0.35, 0});
}
const std::vector<double> kFourPoints{0.11, 0.33, 0.52, 0.81};

SignedSchroderTree random_signed_tree(std::size_t n, Rng& rng) {
  SchroderTree t = sample_schroder_tree(n, rng);
  std::vector<Sign> signs(t.vertex_count());
  for (auto& s : signs) s = rng.coin() ? Sign::plus : Sign::minus;
  return SignedSchroderTree(std::move(t), std::move(signs));
}

std::vector<std::size_t> random_leaf_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::set<std::size_t> s;
  while (s.size() < k) s.insert(1 + static_cast<std::size_t>(rng.below(n)));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("excursion validation and evaluation") {
  CHECK_THROWS(Excursion({0.0}));
  CHECK_THROWS(Excursion({0.0, 1.0}));        // nonzero right endpoint
  CHECK_THROWS(Excursion({0.0, -0.5, 0.0}));  // negative value
  const Excursion f({0, 1.0, 0.5, 0});
  CHECK(f.grid_size() == 3);
  CHECK(f.at(0.0) == 0.0);
  CHECK(f.at(1.0 / 3.0) == 1.0);  // snapped to the grid vertex
  CHECK(f.at(0.5) == doctest::Approx(0.75));
  CHECK(f.max_value() == 1.0);
}

TEST_CASE("brownian excursion sampler basics") {
  Rng rng(10001);
  CHECK_THROWS(sample_brownian_excursion(1, rng));
  const auto f = sample_brownian_excursion(4096, rng);
  CHECK(f.grid_value(0) == 0.0);
  CHECK(f.grid_value(4096) == 0.0);
  std::vector<double> interior(f.grid_values().begin() + 1, f.grid_values().end() - 1);
  for (double v : interior) CHECK(v > 0.0);
  std::sort(interior.begin(), interior.end());
  CHECK(std::adjacent_find(interior.begin(), interior.end()) == interior.end());
}

TEST_CASE("mean of the excursion maximum is sqrt(pi/2)") {
  Rng rng(10002);
  const int reps = 10000;
  double total = 0;
  for (int i = 0; i < reps; ++i) total += sample_brownian_excursion(4096, rng).max_value();
  const double mean = total / reps;
  const double ref = std::sqrt(std::acos(-1.0) / 2.0);
  CHECK(std::abs(mean - ref) / ref < 0.02);
}

TEST_CASE("sign assignment sits exactly on the strict local minima") {
  Rng rng(10003);
  // Single-peak excursion: no interior strict minimum, empty sign map.
  const auto tent = assign_signs(Excursion({0, 0.5, 1.0, 0.5, 0}), rng);
  CHECK(tent.minima().empty());
  CHECK(tent.signs().empty());

  const auto fs = assign_signs(sample_brownian_excursion(8192, rng), rng);
  CHECK(fs.minima() == fs.excursion().strict_local_minima());
  std::uint64_t plus = 0;
  for (auto s : fs.signs())
    if (s == Sign::plus) ++plus;
  const double n = static_cast<double>(fs.signs().size());
  CHECK(n > 1000);  // plenty of minima at this grid size
  CHECK(std::abs(plus / n - 0.5) < 3.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("tree extraction from the four-point excursion") {
  const auto f = four_point_excursion();
  CHECK(extract_tree(f, {0.4}).size() == 1);
  // Minima ordered m3 < m2 < m1 give a left comb.
  CHECK(to_string(extract_tree(f, kFourPoints)) == "(((L L) L) L)");
  CHECK_THROWS(extract_tree(f, {}));
  CHECK_THROWS(extract_tree(f, {1.5}));
}

TEST_CASE("signed extraction of the four-point excursion gives 2341") {
  Rng rng(10004);
  SignedExcursion probe = assign_signs(four_point_excursion(), rng);
  CHECK(probe.minima() == std::vector<std::uint32_t>{4, 8, 13});
  const SignedExcursion fs(four_point_excursion(), {Sign::plus, Sign::plus, Sign::minus});

  const auto ex = extract_signed_tree(fs, kFourPoints);
  REQUIRE(ex.ok());
  CHECK(to_string(*ex.tree) == "(- (+ (+ L L) L) L)");
  const auto pe = extract_perm(fs, kFourPoints);
  REQUIRE(pe.ok());
  CHECK(*pe.perm == p({2, 3, 4, 1}));

  // Sub-selection {x1, x3}: the smaller minimum between them carries +.
  const auto cherry = extract_signed_tree(fs, {kFourPoints[0], kFourPoints[2]});
  REQUIRE(cherry.ok());
  CHECK(to_string(*cherry.tree) == "(+ L L)");

  // Single point: the size-1 permutation, always defined.
  const auto one = extract_perm(fs, {0.37});
  REQUIRE(one.ok());
  CHECK(one.perm->size() == 1);
}

TEST_CASE("condition failures: boundary minimum and sign conflict") {
  Rng rng(10005);
  // Tent: the minimum over (0.25, 0.75) sits at the interval ends.
  const Excursion tent({0, 0.5, 1.0, 0.5, 0});
  const auto fs_tent = assign_signs(tent, rng);
  const auto r1 = extract_signed_tree(fs_tent, {0.25, 0.75});
  CHECK_FALSE(r1.ok());
  CHECK(r1.violation == ConditionCViolation::boundary_minimum);
  // The unsigned extraction is still defined.
  CHECK(extract_tree(tent, {0.25, 0.75}).size() == 2);

  // Two tied minima between three marked points.
  const Excursion twin({0, 2.0, 1.0, 2.0, 1.0, 2.0, 0});
  CHECK(twin.strict_local_minima() == std::vector<std::uint32_t>{2, 4});
  const std::vector<double> x{1.0 / 6, 3.0 / 6, 5.0 / 6};
  const auto conflict = extract_signed_tree(SignedExcursion(twin, {Sign::plus, Sign::minus}), x);
  CHECK_FALSE(conflict.ok());
  CHECK(conflict.violation == ConditionCViolation::sign_conflict);

  const auto merged = extract_signed_tree(SignedExcursion(twin, {Sign::minus, Sign::minus}), x);
  REQUIRE(merged.ok());
  CHECK(to_string(*merged.tree) == "(- L L L)");
  CHECK(extract_tree(twin, x).arity(0) == 3);
}

TEST_CASE("extraction from a signed contour reproduces induced subtrees") {
  Rng rng(10006);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rng.below(12);
    const auto st = random_signed_tree(n, rng);
    const auto fs = signed_contour(st);
    const auto pos = leaf_positions(st.tree());
    const std::size_t k = 1 + rng.below(n);
    const auto I = random_leaf_subset(n, k, rng);
    std::vector<double> x;
    for (auto i : I) x.push_back(pos[i - 1]);

    CHECK(extract_tree(fs.excursion(), x) == induced_subtree(st.tree(), I));
    const auto ex = extract_signed_tree(fs, x);
    REQUIRE(ex.ok());
    CHECK(*ex.tree == induced_subtree(st, I));
    const auto pe = extract_perm(fs, x);
    REQUIRE(pe.ok());
    CHECK(*pe.perm == pattern_at(perm_of(st), I));
  }
}

TEST_CASE("extraction commutes with point subsets") {
  Rng rng(10007);
  for (int rep = 0; rep < 30; ++rep) {
    const auto f = sample_brownian_excursion(1024, rng);
    const auto fs = assign_signs(f, rng);
    const std::size_t k = 3 + rng.below(4);
    std::vector<double> x(k);
    for (auto& v : x) v = rng.uniform01();
    std::sort(x.begin(), x.end());
    std::vector<double> y;
    std::vector<std::size_t> I;
    for (std::size_t i = 0; i < k; ++i) {
      if (rng.coin()) {
        y.push_back(x[i]);
        I.push_back(i + 1);
      }
    }
    if (I.empty()) {
      y.push_back(x[0]);
      I.push_back(1);
    }
    CHECK(extract_tree(f, y) == induced_subtree(extract_tree(f, x), I));
    const auto full = extract_signed_tree(fs, x);
    const auto sub = extract_signed_tree(fs, y);
    if (full.ok() && sub.ok()) CHECK(*sub.tree == induced_subtree(*full.tree, I));
  }
}

TEST_CASE("extracted trees are almost always binary on fine grids") {
  // Ties of interval minima need exact double equality, so binary failures
  // should stay below one per thousand draws at this grid size.
  Rng rng(10008);
  const int reps = 3000;
  int non_binary = 0;
  for (int i = 0; i < reps; ++i) {
    const auto f = sample_brownian_excursion(4096, rng);
    std::vector<double> x(5);
    for (auto& v : x) v = rng.uniform01();
    if (!extract_tree(f, x).is_binary()) ++non_binary;
  }
  CHECK(static_cast<double>(non_binary) / reps <= 0.001);
}

TEST_CASE("condition failure rate shrinks as the grid refines") {
  Rng rng(10009);
  auto failure_rate = [&](std::size_t m, int excursions, int draws_each) {
    std::uint64_t fails = 0, total = 0;
    for (int e = 0; e < excursions; ++e) {
      const auto fs = assign_signs(sample_brownian_excursion(m, rng), rng);
      std::vector<double> x(3);
      for (int d = 0; d < draws_each; ++d) {
        for (auto& v : x) v = rng.uniform01();
        if (!extract_perm(fs, x).ok()) ++fails;
        ++total;
      }
    }
    return static_cast<double>(fails) / static_cast<double>(total);
  };
  const double coarse = failure_rate(1 << 10, 20, 400);
  const double fine = failure_rate(1 << 14, 20, 400);
  CHECK(fine <= coarse + 0.005);
  CHECK(fine < 0.01);
}

TEST_CASE("pr_perm trivial values") {
  Rng rng(10010);
  const auto fs = assign_signs(sample_brownian_excursion(512, rng), rng);
  CHECK(pr_perm(p({1}), fs, DistributionFunction::uniform(), 500, rng).estimate() == 1.0);
  CHECK(pr_perm(p({2, 4, 1, 3}), fs, DistributionFunction::uniform(), 500, rng).estimate() == 0.0);
  CHECK_THROWS(pr_perm(p({1}), fs, DistributionFunction::uniform(), 0, rng));
}

TEST_CASE("leaf-law extraction equals rescaled pattern density, exactly") {
  // Enumerating every k-tuple of leaf positions computes the extraction
  // probability under F_t exactly; it must equal (n)_k / n^k * occ(pi, sigma).
  const auto st = parse_signed_tree("(+ (+ (- L L L) L) L (- L L))");
  const auto sigma = perm_of(st);
  const auto fs = signed_contour(st);
  const auto pos = leaf_positions(st.tree());
  const std::size_t n = pos.size();

  for (const auto& pi : {p({1, 2}), p({2, 1}), p({3, 1, 2}), p({1, 2, 3})}) {
    const std::size_t k = pi.size();
    std::uint64_t matches = 0, tuples = 0;
    std::vector<std::size_t> tuple(k, 0);
    while (true) {
      std::vector<double> x;
      for (auto i : tuple) x.push_back(pos[i]);
      const auto pe = extract_perm(fs, x);
      if (pe.ok() && *pe.perm == pi) ++matches;
      ++tuples;
      std::size_t d = 0;
      while (d < k && ++tuple[d] == n) tuple[d++] = 0;
      if (d == k) break;
    }
    const Rational expected =
        Rational(falling_factorial(n, k), BigInt(static_cast<unsigned long>(tuples))) *
        occ_exact(pi, sigma);
    CHECK(Rational(BigInt(static_cast<unsigned long>(matches)),
                   BigInt(static_cast<unsigned long>(tuples))) == expected);
  }
}

TEST_CASE("pr_perm matches the exact leaf-law value within noise") {
  Rng rng(10011);
  const auto st = parse_signed_tree("(+ (+ (- L L L) L) L (- L L))");
  const auto sigma = perm_of(st);
  const auto fs = signed_contour(st);
  const auto F = leaf_cdf(st.tree());
  const std::size_t n = st.tree().size();
  const std::uint64_t trials = 200000;
  for (const auto& pi : {p({1, 2}), p({1, 2, 3})}) {
    const std::size_t k = pi.size();
    const double exact = (falling_factorial(n, k).get_d() / std::pow(static_cast<double>(n), static_cast<double>(k))) *
                         occ_exact(pi, sigma).to_double();
    const auto est = pr_perm(pi, fs, F, trials, rng);
    CHECK(est.condition_failures == 0);
    CHECK(std::abs(est.estimate() - exact) < 3.0 / std::sqrt(static_cast<double>(trials)));
  }
}

TEST_CASE("pr_tree against exact subset counting") {
  Rng rng(10012);
  const auto st = parse_signed_tree("(+ (+ (- L L L) L) L (- L L))");
  const auto& t = st.tree();
  const auto f = contour(t);
  const auto F = leaf_cdf(t);
  const std::size_t n = t.size(), k = 3;
  const auto t0 = induced_subtree(t, {1, 2, 4});
  std::uint64_t matches = 0, tuples = 0;
  std::vector<std::size_t> tuple(k, 0);
  const auto pos = leaf_positions(t);
  while (true) {
    std::vector<double> x;
    for (auto i : tuple) x.push_back(pos[i]);
    if (extract_tree(f, x) == t0) ++matches;
    ++tuples;
    std::size_t d = 0;
    while (d < k && ++tuple[d] == n) tuple[d++] = 0;
    if (d == k) break;
  }
  const double exact = static_cast<double>(matches) / static_cast<double>(tuples);
  const std::uint64_t trials = 200000;
  const auto est = pr_tree(t0, f, F, trials, rng);
  CHECK(std::abs(est.estimate() - exact) < 3.0 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("scaling constant is kept exactly") {
  // lambda^2 = 2 + (3/2) sqrt(2): the stored coefficients are the identity.
  CHECK(ScalingConstant::square_rational_part_num == 2);
  CHECK(ScalingConstant::square_rational_part_den == 1);
  CHECK(ScalingConstant::square_sqrt2_coeff_num == 3);
  CHECK(ScalingConstant::square_sqrt2_coeff_den == 2);
  const double lam = ScalingConstant::value();
  CHECK(lam == doctest::Approx(std::sqrt(2.0 + 3.0 / std::sqrt(2.0))).epsilon(1e-15));
}

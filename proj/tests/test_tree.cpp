#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "sepperm/sampler.hpp"
#include "sepperm/tree.hpp"

using namespace sepperm;

namespace {

Permutation p(std::initializer_list<std::uint32_t> v) {
  return Permutation(std::vector<std::uint32_t>(v));
}

// The 7-leaf running example: (+ (+ (- L L L) L) L (- L L)) maps to 3214576.
SignedSchroderTree example_tree() {
  return parse_signed_tree("(+ (+ (- L L L) L) L (- L L))");
}

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

TEST_CASE("basic structure and size bound") {
  const SchroderTree leaf = SchroderTree::leaf();
  CHECK(leaf.size() == 1);
  CHECK(leaf.vertex_count() == 1);
  CHECK_THROWS(SchroderTree::internal({SchroderTree::leaf()}));

  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& t : enumerate_schroder_trees(n)) {
      CHECK(t.size() == n);
      CHECK(2 * t.size() >= t.vertex_count() + 1);
      for (SchroderTree::Vertex v = 0; v < t.vertex_count(); ++v)
        if (!t.is_leaf(v)) CHECK(t.arity(v) >= 2);
    }
  }
}

TEST_CASE("enumeration counts are the little Schroeder numbers") {
  const std::size_t expected[] = {1, 1, 3, 11, 45, 197};
  for (std::size_t n = 1; n <= 6; ++n) {
    auto trees = enumerate_schroder_trees(n);
    CHECK(trees.size() == expected[n - 1]);
    std::set<std::string> distinct;
    for (const auto& t : trees) distinct.insert(to_string(t));
    CHECK(distinct.size() == trees.size());
  }
  CHECK(enumerate_binary_trees(4).size() == 5);
  CHECK(enumerate_binary_trees(5).size() == 14);
}

TEST_CASE("perm_of on worked examples") {
  CHECK(perm_of(SignedSchroderTree(SchroderTree::leaf(), {Sign::plus})) == p({1}));
  CHECK(perm_of(parse_signed_tree("(+ L L)")) == p({1, 2}));
  CHECK(perm_of(parse_signed_tree("(- L L)")) == p({2, 1}));
  CHECK(perm_of(example_tree()) == p({3, 2, 1, 4, 5, 7, 6}));
  CHECK(perm_of(parse_signed_tree("(- (+ L L L) L)")) == p({2, 3, 4, 1}));
}

TEST_CASE("decomposition tree of worked examples") {
  const auto dec = decomposition_tree(p({3, 2, 1, 4, 5, 7, 6}));
  CHECK(to_string(dec) == "(+ (- L L L) L L (- L L))");
  CHECK(to_string(decomposition_tree(p({1}))) == "L");
  CHECK_THROWS_AS(decomposition_tree(p({2, 4, 1, 3})), NotSeparableError);
  CHECK_THROWS_AS(decomposition_tree(p({3, 1, 4, 2})), NotSeparableError);
}

TEST_CASE("decomposition round trip and alternation, exhaustive small sizes") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& sigma : all_separable_permutations(n)) {
      const auto dec = decomposition_tree(sigma);
      CHECK(perm_of(dec) == sigma);
      // Signs alternate along every edge.
      const auto& t = dec.tree();
      for (SchroderTree::Vertex v = 0; v < t.vertex_count(); ++v) {
        if (t.is_leaf(v) || v == t.root()) continue;
        SchroderTree::Vertex u = t.parent(v);
        CHECK(dec.sign(v) == flip(dec.sign(u)));
      }
    }
    // Non-separable permutations are exactly the rejected ones.
    for (const auto& sigma : all_permutations(n)) {
      if (is_separable(sigma)) continue;
      CHECK_THROWS_AS(decomposition_tree(sigma), NotSeparableError);
    }
  }
}

TEST_CASE("decomposition recovers alternating signed trees") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const auto& t : enumerate_schroder_trees(n)) {
      for (Sign root : {Sign::plus, Sign::minus}) {
        const auto st = SignedSchroderTree::alternating(t, root);
        CHECK(decomposition_tree(perm_of(st)) == st);
      }
    }
  }
}

TEST_CASE("induced subtree worked example") {
  const auto st = example_tree();
  const auto sub = induced_subtree(st, {2, 4, 7});
  CHECK(to_string(sub) == "(+ (+ L L) L)");
  CHECK(perm_of(sub) == p({1, 2, 3}));
  // Taking every leaf gives the tree back.
  CHECK(induced_subtree(st, {1, 2, 3, 4, 5, 6, 7}) == st);
  CHECK_THROWS(induced_subtree(st, {}));
  CHECK_THROWS(induced_subtree(st, {0, 3}));
  CHECK_THROWS(induced_subtree(st, {3, 8}));
}

TEST_CASE("induced subtree matches pattern extraction") {
  Rng rng(8001);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + rng.below(15);
    const auto st = random_signed_tree(n, rng);
    const std::size_t k = 1 + rng.below(n);
    const auto I = random_leaf_subset(n, k, rng);
    CHECK(perm_of(induced_subtree(st, I)) == pattern_at(perm_of(st), I));
  }
}

TEST_CASE("contour of small trees") {
  const auto cherry = parse_tree("(L L)");
  CHECK(raw_contour(cherry) == std::vector<std::uint32_t>{0, 1, 0, 1, 0});
  CHECK_THROWS(contour(SchroderTree::leaf()));

  const auto t = example_tree().tree();
  const auto rc = raw_contour(t);
  CHECK(rc.size() == 2 * t.vertex_count() - 1);
  CHECK(rc.front() == 0);
  CHECK(rc.back() == 0);
}

TEST_CASE("contour local maxima biject with leaves") {
  Rng rng(8002);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.below(20);
    const auto t = sample_schroder_tree(n, rng);
    const auto rc = raw_contour(t);
    std::size_t maxima = 0;
    for (std::size_t i = 1; i + 1 < rc.size(); ++i)
      if (rc[i - 1] < rc[i] && rc[i] > rc[i + 1]) ++maxima;
    CHECK(maxima == t.size());
    // Local minima sit at internal vertices.
    const auto verts = contour_vertices(t);
    for (std::size_t i = 1; i + 1 < rc.size(); ++i)
      if (rc[i - 1] > rc[i] && rc[i] < rc[i + 1]) CHECK_FALSE(t.is_leaf(verts[i]));
  }
}

TEST_CASE("leaf positions of the running example") {
  const auto t = example_tree().tree();
  const auto pos = leaf_positions(t);
  const std::vector<double> expected{3.0 / 20,  5.0 / 20,  7.0 / 20, 10.0 / 20,
                                     13.0 / 20, 16.0 / 20, 18.0 / 20};
  CHECK(pos == expected);

  const auto F = leaf_cdf(t);
  CHECK(F.value(1.0) == 1.0);
  CHECK(F.quantile(1e-9) == pos.front());
  CHECK(F.quantile(1.0 / 7.0) == pos.front());
  CHECK(F.quantile(1.0) == pos.back());
  CHECK(F.value(0.5) == doctest::Approx(4.0 / 7.0));
  CHECK_THROWS(leaf_cdf(SchroderTree::leaf()));

  // Pseudo-inverse property F(F*(u)) >= u > F(F*(u) - eps) on the step CDF.
  Rng rng(8006);
  for (int rep = 0; rep < 200; ++rep) {
    const double u = rng.uniform01();
    const double q = F.quantile(u);
    CHECK(F.value(q) >= u);
    if (u > 0.0) CHECK(F.value(q - 1e-12) < u);
  }
}

TEST_CASE("lukasiewicz path") {
  CHECK(lukasiewicz(SchroderTree::leaf()) == std::vector<std::int64_t>{0, -1});
  CHECK(lukasiewicz(parse_tree("(L L)")) == std::vector<std::int64_t>{0, 1, 0, -1});
  Rng rng(8003);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 1 + rng.below(30);
    const auto t = sample_schroder_tree(n, rng);
    const auto path = lukasiewicz(t);
    CHECK(path.size() == t.vertex_count() + 1);
    CHECK(path.back() == -1);
    std::size_t down_steps = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (i + 1 < path.size()) CHECK(path[i] >= 0);
      if (path[i] == path[i - 1] - 1) ++down_steps;
    }
    CHECK(down_steps == t.size());
  }
}

TEST_CASE("common ancestors and signs") {
  const auto cherry = parse_signed_tree("(+ L L)");
  CHECK(common_ancestor(cherry.tree(), 1, 2) == cherry.tree().root());
  CHECK(ancestor_sign(cherry, 1, 2) == Sign::plus);
  CHECK_THROWS(common_ancestor(cherry.tree(), 1, 1));

  const auto st = example_tree();
  CHECK(common_ancestor(st.tree(), 1, 5) == st.tree().root());
  CHECK(ancestor_sign(st, 1, 5) == Sign::plus);

  // For i < j: sigma_i < sigma_j iff the common ancestor carries +.
  Rng rng(8004);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rng.below(10);
    const auto t = random_signed_tree(n, rng);
    const auto sigma = perm_of(t);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        CHECK((sigma.at(i) < sigma.at(j)) == (ancestor_sign(t, i, j) == Sign::plus));
  }
}

TEST_CASE("tree serialization round trip") {
  Rng rng(8005);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rng.below(12);
    const auto st = random_signed_tree(n, rng);
    CHECK(parse_signed_tree(to_string(st)) == st);
    CHECK(parse_tree(to_string(st.tree())) == st.tree());
  }
  CHECK(to_string(parse_signed_tree("(+ L (- L L))")) == "(+ L (- L L))");
  CHECK_THROWS(parse_tree("(L)"));
  CHECK_THROWS(parse_tree("(L L"));
  CHECK_THROWS(parse_tree("L L"));
  CHECK_THROWS(parse_signed_tree("(L L)"));
  CHECK_THROWS(parse_tree(""));
}

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sepperm/dist_fn.hpp"
#include "sepperm/excursion.hpp"
#include "sepperm/permutation.hpp"

namespace sepperm {

/// Plane tree whose internal vertices all have arity >= 2. Size |t| is the
/// leaf count, #t the vertex count. Vertices are identified by DFS preorder
/// rank (root = 0); leaves are additionally ranked 1..|t| left to right.
/// Immutable after construction.
class SchroderTree {
 public:
  using Vertex = std::uint32_t;
  static constexpr Vertex kNoVertex = static_cast<Vertex>(-1);

  static SchroderTree leaf();
  static SchroderTree internal(std::vector<SchroderTree> children);
  /// Builds from the preorder arity sequence (0 = leaf, k >= 2 = internal).
  static SchroderTree from_preorder_arities(const std::vector<std::uint32_t>& arities);

  std::size_t size() const { return leaves_.size(); }          // |t|
  std::size_t vertex_count() const { return nodes_.size(); }   // #t

  bool is_leaf(Vertex v) const { return nodes_[v].children.empty(); }
  std::uint32_t arity(Vertex v) const { return static_cast<std::uint32_t>(nodes_[v].children.size()); }
  const std::vector<Vertex>& children(Vertex v) const { return nodes_[v].children; }
  Vertex parent(Vertex v) const { return nodes_[v].parent; }
  std::uint32_t depth(Vertex v) const { return nodes_[v].depth; }
  Vertex root() const { return 0; }

  /// Leaf vertices in left-to-right order.
  const std::vector<Vertex>& leaves() const { return leaves_; }
  Vertex leaf_vertex(std::size_t rank_1based) const;
  /// Left-to-right rank (1-based) of a leaf vertex.
  std::size_t leaf_rank(Vertex v) const;

  /// One past the last preorder id in the subtree rooted at v.
  Vertex subtree_end(Vertex v) const { return nodes_[v].end; }
  /// Ancestor-or-equal test via preorder intervals.
  bool is_ancestor(Vertex u, Vertex v) const { return u <= v && v < nodes_[u].end; }

  bool is_binary() const;
  std::vector<std::uint32_t> preorder_arities() const;

  friend bool operator==(const SchroderTree& a, const SchroderTree& b);

 private:
  struct Node {
    std::vector<Vertex> children;
    Vertex parent = kNoVertex;
    std::uint32_t depth = 0;
    Vertex end = 0;
  };
  std::vector<Node> nodes_;
  std::vector<Vertex> leaves_;
  std::vector<std::uint32_t> leaf_rank_;  // by vertex; 0 for internal

  void finish();  // fills parents/depth/end/leaves from children lists
};

/// Schröder tree with a {+,-} sign on every internal vertex.
class SignedSchroderTree {
 public:
  SignedSchroderTree() : tree_(SchroderTree::leaf()) {}
  /// `signs` indexed by vertex id; entries at leaves are ignored.
  SignedSchroderTree(SchroderTree tree, std::vector<Sign> signs);
  /// Alternating signs determined by the root sign.
  static SignedSchroderTree alternating(SchroderTree tree, Sign root_sign);

  const SchroderTree& tree() const { return tree_; }
  Sign sign(SchroderTree::Vertex v) const;

  friend bool operator==(const SignedSchroderTree& a, const SignedSchroderTree& b);

 private:
  SchroderTree tree_;
  std::vector<Sign> signs_;
};

struct NotSeparableError : std::domain_error {
  NotSeparableError() : std::domain_error("permutation is not separable") {}
};

/// perm(t, eps): leaf -> 1, + root -> direct sum of children, - root -> skew sum.
Permutation perm_of(const SignedSchroderTree& st);

/// The unique sign-alternating signed Schröder tree mapping to sigma.
/// Throws NotSeparableError when no direct/skew split exists at some level.
SignedSchroderTree decomposition_tree(const Permutation& sigma);

/// Subtree induced by a set of leaves (1-based left-to-right ranks; sorted,
/// distinct, nonempty): kept internal vertices are exactly the pairwise
/// common ancestors of the selected leaves.
SchroderTree induced_subtree(const SchroderTree& t, const std::vector<std::size_t>& leaf_ranks);
SignedSchroderTree induced_subtree(const SignedSchroderTree& st,
                                   const std::vector<std::size_t>& leaf_ranks);

/// As above, also reporting the original vertex behind each induced vertex.
struct InducedSubtree {
  SchroderTree tree;
  std::vector<SchroderTree::Vertex> source;  // by induced vertex id
};
InducedSubtree induced_subtree_with_map(const SchroderTree& t,
                                        const std::vector<std::size_t>& leaf_ranks);

/// Depth profile of the DFS walk: 2#t - 1 integer values on 0..2#t-2.
std::vector<std::uint32_t> raw_contour(const SchroderTree& t);
/// Vertex visited at each contour abscissa (same length as raw_contour).
std::vector<SchroderTree::Vertex> contour_vertices(const SchroderTree& t);
/// Normalized contour C_t((2#t-2)u)/sqrt(|t|) as an Excursion; needs |t| >= 2.
Excursion contour(const SchroderTree& t);
/// Signed normalized contour; signs sit on the strict local minima, which
/// all correspond to internal vertices.
SignedExcursion signed_contour(const SignedSchroderTree& st);

/// x-coordinates of the contour's local maxima, one per leaf; |t| >= 2.
std::vector<double> leaf_positions(const SchroderTree& t);
/// Step CDF F_t with jumps 1/|t| at the leaf positions; |t| >= 2.
DistributionFunction leaf_cdf(const SchroderTree& t);

/// Depth-first queue process R_0..R_{#t}: R_0 = 0, step = arity - 1 in
/// preorder; ends at -1, prefix-nonnegative before that.
std::vector<std::int64_t> lukasiewicz(const SchroderTree& t);

SchroderTree::Vertex common_ancestor(const SchroderTree& t, std::size_t leaf_i,
                                     std::size_t leaf_j);
Sign ancestor_sign(const SignedSchroderTree& st, std::size_t leaf_i, std::size_t leaf_j);

/// All Schröder trees with n leaves (by brute-force composition expansion).
std::vector<SchroderTree> enumerate_schroder_trees(std::size_t n);
/// All binary trees with n leaves.
std::vector<SchroderTree> enumerate_binary_trees(std::size_t n);

/// CSV exports, one "index,value" row per point of the path.
std::string contour_csv(const SchroderTree& t);
std::string lukasiewicz_csv(const SchroderTree& t);

/// Nested-parenthesis form: leaf "L", internal "(child child ...)", signed
/// internal "(+ child child ...)" / "(- ...)".
std::string to_string(const SchroderTree& t);
std::string to_string(const SignedSchroderTree& st);
SchroderTree parse_tree(std::string_view text);
SignedSchroderTree parse_signed_tree(std::string_view text);

}  // namespace sepperm

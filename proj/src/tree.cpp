#include "sepperm/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace sepperm {

void SchroderTree::finish() {
  const std::size_t n = nodes_.size();
  leaves_.clear();
  leaf_rank_.assign(n, 0);
  // Parents and depths top-down; subtree ends bottom-up on the preorder array.
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex c : nodes_[v].children) {
      nodes_[c].parent = v;
      nodes_[c].depth = nodes_[v].depth + 1;
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    Vertex v = static_cast<Vertex>(i);
    if (nodes_[v].children.empty()) {
      nodes_[v].end = v + 1;
    } else {
      if (nodes_[v].children.size() < 2)
        throw std::invalid_argument("SchroderTree: internal arity must be >= 2");
      nodes_[v].end = nodes_[nodes_[v].children.back()].end;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (nodes_[v].children.empty()) {
      leaves_.push_back(v);
      leaf_rank_[v] = static_cast<std::uint32_t>(leaves_.size());
    }
  }
}

SchroderTree SchroderTree::leaf() {
  SchroderTree t;
  t.nodes_.resize(1);
  t.finish();
  return t;
}

SchroderTree SchroderTree::internal(std::vector<SchroderTree> children) {
  if (children.size() < 2) throw std::invalid_argument("SchroderTree: arity must be >= 2");
  SchroderTree t;
  std::size_t total = 1;
  for (const auto& c : children) total += c.vertex_count();
  t.nodes_.resize(total);
  Vertex offset = 1;
  for (const auto& c : children) {
    t.nodes_[0].children.push_back(offset);
    for (Vertex v = 0; v < c.vertex_count(); ++v) {
      for (Vertex cc : c.nodes_[v].children) t.nodes_[offset + v].children.push_back(offset + cc);
    }
    offset += static_cast<Vertex>(c.vertex_count());
  }
  t.finish();
  return t;
}

SchroderTree SchroderTree::from_preorder_arities(const std::vector<std::uint32_t>& arities) {
  if (arities.empty()) throw std::invalid_argument("from_preorder_arities: empty sequence");
  SchroderTree t;
  t.nodes_.resize(arities.size());
  std::vector<Vertex> stack;  // vertices still expecting children
  std::vector<std::uint32_t> missing;
  for (Vertex v = 0; v < arities.size(); ++v) {
    if (!stack.empty()) {
      t.nodes_[stack.back()].children.push_back(v);
      if (--missing.back() == 0) {
        stack.pop_back();
        missing.pop_back();
        while (!stack.empty() && missing.back() == 0) {
          stack.pop_back();
          missing.pop_back();
        }
      }
    } else if (v != 0) {
      throw std::invalid_argument("from_preorder_arities: sequence continues past a full tree");
    }
    if (arities[v] == 1) throw std::invalid_argument("from_preorder_arities: arity 1 forbidden");
    if (arities[v] >= 2) {
      stack.push_back(v);
      missing.push_back(arities[v]);
    }
  }
  if (!stack.empty()) throw std::invalid_argument("from_preorder_arities: incomplete tree");
  t.finish();
  return t;
}

SchroderTree::Vertex SchroderTree::leaf_vertex(std::size_t rank_1based) const {
  if (rank_1based < 1 || rank_1based > leaves_.size())
    throw std::out_of_range("SchroderTree::leaf_vertex: rank out of range");
  return leaves_[rank_1based - 1];
}

std::size_t SchroderTree::leaf_rank(Vertex v) const {
  if (v >= nodes_.size() || !nodes_[v].children.empty())
    throw std::invalid_argument("SchroderTree::leaf_rank: not a leaf");
  return leaf_rank_[v];
}

bool SchroderTree::is_binary() const {
  for (const auto& nd : nodes_)
    if (!nd.children.empty() && nd.children.size() != 2) return false;
  return true;
}

std::vector<std::uint32_t> SchroderTree::preorder_arities() const {
  std::vector<std::uint32_t> out(nodes_.size());
  for (Vertex v = 0; v < nodes_.size(); ++v) out[v] = arity(v);
  return out;
}

bool operator==(const SchroderTree& a, const SchroderTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (SchroderTree::Vertex v = 0; v < a.nodes_.size(); ++v)
    if (a.nodes_[v].children != b.nodes_[v].children) return false;
  return true;
}

SignedSchroderTree::SignedSchroderTree(SchroderTree tree, std::vector<Sign> signs)
    : tree_(std::move(tree)), signs_(std::move(signs)) {
  if (signs_.size() != tree_.vertex_count())
    throw std::invalid_argument("SignedSchroderTree: one sign slot per vertex required");
}

SignedSchroderTree SignedSchroderTree::alternating(SchroderTree tree, Sign root_sign) {
  std::vector<Sign> signs(tree.vertex_count());
  for (SchroderTree::Vertex v = 0; v < tree.vertex_count(); ++v)
    signs[v] = (tree.depth(v) % 2 == 0) ? root_sign : flip(root_sign);
  return SignedSchroderTree(std::move(tree), std::move(signs));
}

Sign SignedSchroderTree::sign(SchroderTree::Vertex v) const {
  if (tree_.is_leaf(v)) throw std::invalid_argument("SignedSchroderTree::sign: leaves are unsigned");
  return signs_[v];
}

bool operator==(const SignedSchroderTree& a, const SignedSchroderTree& b) {
  if (!(a.tree_ == b.tree_)) return false;
  for (SchroderTree::Vertex v = 0; v < a.tree_.vertex_count(); ++v)
    if (!a.tree_.is_leaf(v) && a.signs_[v] != b.signs_[v]) return false;
  return true;
}

Permutation perm_of(const SignedSchroderTree& st) {
  const SchroderTree& t = st.tree();
  // DFS assigning values in increasing order; at a minus vertex the children
  // are visited right-to-left, so later positions get smaller values.
  std::vector<std::uint32_t> values(t.size());
  std::vector<SchroderTree::Vertex> stack{t.root()};
  std::uint32_t next_value = 0;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (t.is_leaf(v)) {
      values[t.leaf_rank(v) - 1] = ++next_value;
      continue;
    }
    const auto& ch = t.children(v);
    if (st.sign(v) == Sign::plus) {
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    } else {
      for (auto c : ch) stack.push_back(c);
    }
  }
  return Permutation(std::move(values));
}

namespace {

// One block of the substitution decomposition: positions [lo, hi] of sigma
// (0-based, inclusive) whose values form the contiguous range
// [vmin, vmin + (hi - lo)].
struct Block {
  std::uint32_t lo, hi, vmin;
};

// Appends the end positions (inclusive) of the maximal direct-sum blocks.
// A prefix [lo..i] is a block boundary when its max value equals
// vmin + (i - lo). Returns the number of boundaries found.
std::size_t plus_boundaries(const Permutation& s, const Block& b, std::vector<std::uint32_t>& out) {
  out.clear();
  std::uint32_t run_max = 0;
  for (std::uint32_t i = b.lo; i <= b.hi; ++i) {
    run_max = std::max(run_max, s.values()[i]);
    if (run_max == b.vmin + (i - b.lo)) out.push_back(i);
  }
  return out.size();
}

std::size_t minus_boundaries(const Permutation& s, const Block& b, std::vector<std::uint32_t>& out) {
  out.clear();
  const std::uint32_t vmax = b.vmin + (b.hi - b.lo);
  std::uint32_t run_min = static_cast<std::uint32_t>(-1);
  for (std::uint32_t i = b.lo; i <= b.hi; ++i) {
    run_min = std::min(run_min, s.values()[i]);
    if (run_min == vmax - (i - b.lo)) out.push_back(i);
  }
  return out.size();
}

}  // namespace

SignedSchroderTree decomposition_tree(const Permutation& sigma) {
  // Iterative prefix-max / prefix-min block splitting; blocks are pushed
  // rightmost-first so vertices come out in preorder.
  std::vector<std::uint32_t> arities;
  std::vector<Sign> signs;
  const auto n = static_cast<std::uint32_t>(sigma.size());
  std::vector<Block> stack{{0, n - 1, 1}};
  std::vector<std::uint32_t> cuts;
  while (!stack.empty()) {
    const Block b = stack.back();
    stack.pop_back();
    if (b.lo == b.hi) {
      arities.push_back(0);
      signs.push_back(Sign::plus);  // placeholder, leaves carry no sign
      continue;
    }
    Sign sg;
    if (plus_boundaries(sigma, b, cuts) >= 2) {
      sg = Sign::plus;
    } else if (minus_boundaries(sigma, b, cuts) >= 2) {
      sg = Sign::minus;
    } else {
      throw NotSeparableError();
    }
    arities.push_back(static_cast<std::uint32_t>(cuts.size()));
    signs.push_back(sg);
    // Child value ranges: increasing along positions for +, decreasing for -.
    std::uint32_t start = b.lo;
    std::vector<Block> blocks;
    for (std::uint32_t cut : cuts) {
      Block child{start, cut, 0};
      child.vmin = (sg == Sign::plus) ? b.vmin + (start - b.lo) : b.vmin + (b.hi - cut);
      blocks.push_back(child);
      start = cut + 1;
    }
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) stack.push_back(*it);
  }
  SchroderTree t = SchroderTree::from_preorder_arities(arities);
  return SignedSchroderTree(std::move(t), std::move(signs));
}

InducedSubtree induced_subtree_with_map(const SchroderTree& t,
                                        const std::vector<std::size_t>& leaf_ranks) {
  if (leaf_ranks.empty()) throw std::invalid_argument("induced_subtree: empty leaf set");
  for (std::size_t j = 0; j < leaf_ranks.size(); ++j) {
    if (leaf_ranks[j] < 1 || leaf_ranks[j] > t.size())
      throw std::out_of_range("induced_subtree: leaf rank out of range");
    if (j > 0 && leaf_ranks[j] <= leaf_ranks[j - 1])
      throw std::invalid_argument("induced_subtree: leaf ranks must be sorted and distinct");
  }
  // Kept vertices: the selected leaves plus common ancestors of consecutive
  // selected leaves (which is the full set of pairwise common ancestors).
  std::vector<SchroderTree::Vertex> kept;
  for (auto r : leaf_ranks) kept.push_back(t.leaf_vertex(r));
  for (std::size_t j = 0; j + 1 < leaf_ranks.size(); ++j)
    kept.push_back(common_ancestor(t, leaf_ranks[j], leaf_ranks[j + 1]));
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

  // Preorder-sorted kept vertices are the preorder of the induced tree;
  // attach each vertex to the nearest kept ancestor via a stack.
  const std::size_t k = kept.size();
  std::vector<std::vector<std::uint32_t>> child_ids(k);
  std::vector<std::size_t> anc_stack;
  for (std::size_t i = 0; i < k; ++i) {
    while (!anc_stack.empty() && !t.is_ancestor(kept[anc_stack.back()], kept[i]))
      anc_stack.pop_back();
    if (!anc_stack.empty()) child_ids[anc_stack.back()].push_back(static_cast<std::uint32_t>(i));
    anc_stack.push_back(i);
  }
  std::vector<std::uint32_t> arities(k);
  for (std::size_t i = 0; i < k; ++i) arities[i] = static_cast<std::uint32_t>(child_ids[i].size());
  InducedSubtree out{SchroderTree::from_preorder_arities(arities), std::move(kept)};
  return out;
}

SchroderTree induced_subtree(const SchroderTree& t, const std::vector<std::size_t>& leaf_ranks) {
  return induced_subtree_with_map(t, leaf_ranks).tree;
}

SignedSchroderTree induced_subtree(const SignedSchroderTree& st,
                                   const std::vector<std::size_t>& leaf_ranks) {
  InducedSubtree ind = induced_subtree_with_map(st.tree(), leaf_ranks);
  std::vector<Sign> signs(ind.tree.vertex_count(), Sign::plus);
  for (SchroderTree::Vertex v = 0; v < ind.tree.vertex_count(); ++v)
    if (!ind.tree.is_leaf(v)) signs[v] = st.sign(ind.source[v]);
  return SignedSchroderTree(std::move(ind.tree), std::move(signs));
}

std::vector<SchroderTree::Vertex> contour_vertices(const SchroderTree& t) {
  std::vector<SchroderTree::Vertex> out;
  out.reserve(2 * t.vertex_count() - 1);
  // Euler walk: next unvisited child, else parent.
  std::vector<std::uint32_t> next_child(t.vertex_count(), 0);
  SchroderTree::Vertex v = t.root();
  out.push_back(v);
  while (true) {
    if (next_child[v] < t.arity(v)) {
      v = t.children(v)[next_child[v]++];
      out.push_back(v);
    } else {
      if (v == t.root()) break;
      v = t.parent(v);
      out.push_back(v);
    }
  }
  return out;
}

std::vector<std::uint32_t> raw_contour(const SchroderTree& t) {
  std::vector<std::uint32_t> out;
  for (auto v : contour_vertices(t)) out.push_back(t.depth(v));
  return out;
}

Excursion contour(const SchroderTree& t) {
  if (t.size() < 2)
    throw std::invalid_argument("contour: normalized contour needs |t| >= 2");
  const double scale = 1.0 / std::sqrt(static_cast<double>(t.size()));
  std::vector<double> vals;
  for (auto d : raw_contour(t)) vals.push_back(static_cast<double>(d) * scale);
  return Excursion(std::move(vals));
}

SignedExcursion signed_contour(const SignedSchroderTree& st) {
  Excursion f = contour(st.tree());
  const auto verts = contour_vertices(st.tree());
  std::vector<Sign> signs;
  for (auto i : f.strict_local_minima()) signs.push_back(st.sign(verts[i]));
  return SignedExcursion(std::move(f), std::move(signs));
}

std::vector<double> leaf_positions(const SchroderTree& t) {
  if (t.size() < 2) throw std::invalid_argument("leaf_positions: needs |t| >= 2");
  const auto verts = contour_vertices(t);
  const double m = static_cast<double>(verts.size() - 1);
  std::vector<double> out;
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (t.is_leaf(verts[i])) out.push_back(static_cast<double>(i) / m);
  return out;
}

DistributionFunction leaf_cdf(const SchroderTree& t) {
  return DistributionFunction::equal_step(leaf_positions(t));
}

std::vector<std::int64_t> lukasiewicz(const SchroderTree& t) {
  std::vector<std::int64_t> out{0};
  std::int64_t r = 0;
  for (SchroderTree::Vertex v = 0; v < t.vertex_count(); ++v) {
    r += static_cast<std::int64_t>(t.arity(v)) - 1;
    out.push_back(r);
  }
  return out;
}

SchroderTree::Vertex common_ancestor(const SchroderTree& t, std::size_t leaf_i,
                                     std::size_t leaf_j) {
  if (leaf_i == leaf_j) throw std::invalid_argument("common_ancestor: leaves must differ");
  SchroderTree::Vertex u = t.leaf_vertex(leaf_i), v = t.leaf_vertex(leaf_j);
  while (t.depth(u) > t.depth(v)) u = t.parent(u);
  while (t.depth(v) > t.depth(u)) v = t.parent(v);
  while (u != v) {
    u = t.parent(u);
    v = t.parent(v);
  }
  return u;
}

Sign ancestor_sign(const SignedSchroderTree& st, std::size_t leaf_i, std::size_t leaf_j) {
  return st.sign(common_ancestor(st.tree(), leaf_i, leaf_j));
}

namespace {

void compositions_into(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                       std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    if (total >= 1) {
      cur.push_back(total);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (std::size_t first = 1; first + (parts - 1) <= total; ++first) {
    cur.push_back(first);
    compositions_into(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<SchroderTree> enumerate_schroder_trees(std::size_t n) {
  if (n == 0) throw std::invalid_argument("enumerate_schroder_trees: n must be >= 1");
  if (n == 1) return {SchroderTree::leaf()};
  std::vector<std::vector<SchroderTree>> memo(n + 1);
  memo[1] = {SchroderTree::leaf()};
  for (std::size_t s = 2; s <= n; ++s) {
    for (std::size_t r = 2; r <= s; ++r) {
      std::vector<std::vector<std::size_t>> comps;
      std::vector<std::size_t> cur;
      compositions_into(s, r, cur, comps);
      for (const auto& comp : comps) {
        // Cross product of child choices.
        std::vector<std::size_t> pick(r, 0);
        while (true) {
          std::vector<SchroderTree> children;
          for (std::size_t i = 0; i < r; ++i) children.push_back(memo[comp[i]][pick[i]]);
          memo[s].push_back(SchroderTree::internal(std::move(children)));
          std::size_t i = r;
          while (i > 0) {
            --i;
            if (++pick[i] < memo[comp[i]].size()) break;
            pick[i] = 0;
            if (i == 0) goto done_comp;
          }
          if (r == 1) break;
        }
      done_comp:;
      }
    }
  }
  return memo[n];
}

std::vector<SchroderTree> enumerate_binary_trees(std::size_t n) {
  if (n == 0) throw std::invalid_argument("enumerate_binary_trees: n must be >= 1");
  std::vector<std::vector<SchroderTree>> memo(n + 1);
  memo[1] = {SchroderTree::leaf()};
  for (std::size_t s = 2; s <= n; ++s)
    for (std::size_t a = 1; a < s; ++a)
      for (const auto& left : memo[a])
        for (const auto& right : memo[s - a])
          memo[s].push_back(SchroderTree::internal({left, right}));
  return memo[n];
}

std::string contour_csv(const SchroderTree& t) {
  std::ostringstream os;
  os << "# schema: sepperm.contour.v1\nindex,value\n";
  const auto rc = raw_contour(t);
  for (std::size_t i = 0; i < rc.size(); ++i) os << i << ',' << rc[i] << '\n';
  return os.str();
}

std::string lukasiewicz_csv(const SchroderTree& t) {
  std::ostringstream os;
  os << "# schema: sepperm.lukasiewicz.v1\nindex,value\n";
  const auto path = lukasiewicz(t);
  for (std::size_t i = 0; i < path.size(); ++i) os << i << ',' << path[i] << '\n';
  return os.str();
}

namespace {

void append_tree(const SchroderTree& t, const SignedSchroderTree* st, std::string& out) {
  // Iterative serialization; frame second field = next child slot.
  std::vector<std::pair<SchroderTree::Vertex, std::size_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& [v, slot] = stack.back();
    if (t.is_leaf(v)) {
      out += 'L';
      stack.pop_back();
      continue;
    }
    if (slot == 0) {
      out += '(';
      if (st) {
        out += sign_char(st->sign(v));
      }
    }
    if (slot < t.arity(v)) {
      if (slot > 0 || st) out += ' ';
      const auto c = t.children(v)[slot];
      ++slot;
      stack.push_back({c, 0});
    } else {
      out += ')';
      stack.pop_back();
    }
  }
}

struct TreeParser {
  std::string_view text;
  std::size_t pos = 0;
  bool signed_mode;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n'))
      ++pos;
  }

  [[noreturn]] void fail(const char* msg) {
    throw std::invalid_argument(std::string("parse_tree: ") + msg);
  }

  // Iterative parse into preorder arity/sign sequences.
  void parse(std::vector<std::uint32_t>& arities, std::vector<Sign>& signs) {
    struct Frame {
      std::size_t arity_index;
      std::uint32_t count = 0;
    };
    std::vector<Frame> stack;
    bool done = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) {
        if (!done || !stack.empty()) fail("unexpected end of input");
        return;
      }
      if (done) fail("trailing input");
      const char c = text[pos];
      if (c == 'L') {
        ++pos;
        arities.push_back(0);
        signs.push_back(Sign::plus);
        if (stack.empty())
          done = true;
        else
          ++stack.back().count;
      } else if (c == '(') {
        ++pos;
        skip_ws();
        Sign sg = Sign::plus;
        if (signed_mode) {
          if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-'))
            fail("expected sign after '('");
          sg = text[pos] == '+' ? Sign::plus : Sign::minus;
          ++pos;
        }
        arities.push_back(0);  // fixed at ')'
        signs.push_back(sg);
        stack.push_back({arities.size() - 1, 0});
      } else if (c == ')') {
        ++pos;
        if (stack.empty()) fail("unmatched ')'");
        if (stack.back().count < 2) fail("internal vertex needs >= 2 children");
        arities[stack.back().arity_index] = stack.back().count;
        stack.pop_back();
        if (stack.empty())
          done = true;
        else
          ++stack.back().count;
      } else {
        fail("unexpected character");
      }
    }
  }
};

}  // namespace

std::string to_string(const SchroderTree& t) {
  std::string out;
  append_tree(t, nullptr, out);
  return out;
}

std::string to_string(const SignedSchroderTree& st) {
  std::string out;
  append_tree(st.tree(), &st, out);
  return out;
}

SchroderTree parse_tree(std::string_view text) {
  TreeParser p{text, 0, false};
  std::vector<std::uint32_t> arities;
  std::vector<Sign> signs;
  p.parse(arities, signs);
  return SchroderTree::from_preorder_arities(arities);
}

SignedSchroderTree parse_signed_tree(std::string_view text) {
  TreeParser p{text, 0, true};
  std::vector<std::uint32_t> arities;
  std::vector<Sign> signs;
  p.parse(arities, signs);
  return SignedSchroderTree(SchroderTree::from_preorder_arities(arities), std::move(signs));
}

}  // namespace sepperm

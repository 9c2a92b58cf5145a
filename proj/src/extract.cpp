#include "sepperm/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sepperm {

namespace {

void sort_dedupe(std::vector<double>& points) {
  if (points.empty()) throw std::invalid_argument("extraction: need at least one point");
  for (double x : points)
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("extraction: points must lie in [0,1]");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
}

// Per consecutive-pair data for one extraction.
struct IntervalData {
  std::vector<double> min_value;            // m_i
  std::vector<bool> interior;               // clause 1
  std::vector<Sign> sign;                   // defined when signed extraction succeeds so far
  std::vector<ConditionCViolation> status;  // per interval
};

IntervalData interval_scan(const Excursion& f, const SignedExcursion* fs,
                           const std::vector<double>& x) {
  IntervalData d;
  const std::size_t k = x.size();
  d.min_value.resize(k - 1);
  d.interior.assign(k - 1, false);
  d.sign.assign(k - 1, Sign::plus);
  d.status.assign(k - 1, ConditionCViolation::none);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const auto im = f.interval_min(x[i], x[i + 1]);
    d.min_value[i] = im.value;
    d.interior[i] = im.interior;
    if (!fs) continue;
    if (im.interior) {
      // All minimizing strict local minima inside (x_i, x_{i+1}) must agree.
      bool have = false;
      Sign s = Sign::plus;
      for (std::uint32_t v = im.first_grid; v <= im.last_grid; ++v) {
        if (f.grid_value(v) != im.interior_value) continue;
        if (!fs->is_minimum(v)) continue;
        const Sign sv = fs->sign_at(v);
        if (!have) {
          have = true;
          s = sv;
        } else if (sv != s) {
          d.status[i] = ConditionCViolation::sign_conflict;
          break;
        }
      }
      if (d.status[i] != ConditionCViolation::none) continue;
      if (!have) {
        d.status[i] = ConditionCViolation::boundary_minimum;
        continue;
      }
      d.sign[i] = s;
      continue;
    }
    // The minimum is attained at an interval endpoint, where the grid path
    // has no signed local minimum of its own: the piecewise-linear
    // interpolation hides the sub-grid valley the underlying path descends
    // into there. Resolve the sign from the nearest valley bottom downhill of
    // the minimizing endpoint; fail on an exact endpoint tie or when the
    // slide runs off the excursion.
    const double fa = f.at(x[i]), fb = f.at(x[i + 1]);
    std::optional<std::uint32_t> valley;
    if (fa == im.value && fb == im.value) {
      d.status[i] = ConditionCViolation::boundary_minimum;
      continue;
    }
    if (fb == im.value)
      valley = f.slide_to_valley(x[i + 1], +1);
    else
      valley = f.slide_to_valley(x[i], -1);
    if (!valley) {
      d.status[i] = ConditionCViolation::boundary_minimum;
      continue;
    }
    d.sign[i] = fs->sign_at(*valley);
  }
  return d;
}

// Recursive splitting on point index ranges [lo, hi]; emits preorder arities
// (and signs in the signed case). Returns false on a sign conflict between
// tied minima at one node.
bool build_node(const IntervalData& d, std::size_t lo, std::size_t hi, bool signed_mode,
                std::vector<std::uint32_t>& arities, std::vector<Sign>& signs) {
  if (lo == hi) {
    arities.push_back(0);
    signs.push_back(Sign::plus);
    return true;
  }
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = lo; i < hi; ++i) m = std::min(m, d.min_value[i]);
  std::vector<std::size_t> cuts;
  for (std::size_t i = lo; i < hi; ++i)
    if (d.min_value[i] == m) cuts.push_back(i);
  Sign node_sign = Sign::plus;
  if (signed_mode) {
    node_sign = d.sign[cuts.front()];
    for (std::size_t c : cuts)
      if (d.sign[c] != node_sign) return false;
  }
  arities.push_back(static_cast<std::uint32_t>(cuts.size()) + 1);
  signs.push_back(node_sign);
  std::size_t start = lo;
  for (std::size_t c : cuts) {
    if (!build_node(d, start, c, signed_mode, arities, signs)) return false;
    start = c + 1;
  }
  return build_node(d, start, hi, signed_mode, arities, signs);
}

}  // namespace

SchroderTree extract_tree(const Excursion& f, std::vector<double> points) {
  sort_dedupe(points);
  if (points.size() == 1) return SchroderTree::leaf();
  const IntervalData d = interval_scan(f, nullptr, points);
  std::vector<std::uint32_t> arities;
  std::vector<Sign> signs;
  build_node(d, 0, points.size() - 1, false, arities, signs);
  return SchroderTree::from_preorder_arities(arities);
}

SignedExtraction extract_signed_tree(const SignedExcursion& fs, std::vector<double> points) {
  SignedExtraction out;
  sort_dedupe(points);
  if (points.size() == 1) {
    out.tree = SignedSchroderTree(SchroderTree::leaf(), {Sign::plus});
    return out;
  }
  const IntervalData d = interval_scan(fs.excursion(), &fs, points);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (d.status[i] != ConditionCViolation::none) {
      out.violation = d.status[i];
      return out;
    }
  }
  std::vector<std::uint32_t> arities;
  std::vector<Sign> signs;
  if (!build_node(d, 0, points.size() - 1, true, arities, signs)) {
    out.violation = ConditionCViolation::sign_conflict;
    return out;
  }
  out.tree = SignedSchroderTree(SchroderTree::from_preorder_arities(arities), std::move(signs));
  return out;
}

PermExtraction extract_perm(const SignedExcursion& fs, std::vector<double> points) {
  PermExtraction out;
  SignedExtraction ex = extract_signed_tree(fs, std::move(points));
  out.violation = ex.violation;
  if (ex.ok()) out.perm = perm_of(*ex.tree);
  return out;
}

EstimatorResult pr_tree(const SchroderTree& t0, const Excursion& f,
                        const DistributionFunction& F, std::uint64_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("pr_tree: trials must be >= 1");
  EstimatorResult r;
  r.trials = trials;
  const std::size_t k = t0.size();
  std::vector<double> pts(k);
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (auto& p : pts) p = F.quantile(rng.uniform01());
    SchroderTree got = extract_tree(f, pts);
    if (got == t0) ++r.matches;
  }
  return r;
}

EstimatorResult pr_perm(const Permutation& pi, const SignedExcursion& fs,
                        const DistributionFunction& F, std::uint64_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("pr_perm: trials must be >= 1");
  EstimatorResult r;
  r.trials = trials;
  const std::size_t k = pi.size();
  std::vector<double> pts(k);
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (auto& p : pts) p = F.quantile(rng.uniform01());
    PermExtraction got = extract_perm(fs, pts);
    if (!got.ok()) {
      ++r.condition_failures;
      continue;
    }
    if (*got.perm == pi) ++r.matches;
  }
  return r;
}

double ScalingConstant::value() {
  const double sq = static_cast<double>(square_rational_part_num) /
                        static_cast<double>(square_rational_part_den) +
                    static_cast<double>(square_sqrt2_coeff_num) /
                        static_cast<double>(square_sqrt2_coeff_den) * std::sqrt(2.0);
  return std::sqrt(sq);
}

}  // namespace sepperm

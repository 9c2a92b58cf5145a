#include "sepperm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "sepperm/extract.hpp"

namespace sepperm {

bool ExperimentReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void ExperimentReport::add_param(const std::string& key, const std::string& value) {
  params.emplace_back(key, value);
}
void ExperimentReport::add_param(const std::string& key, std::uint64_t value) {
  params.emplace_back(key, std::to_string(value));
}
void ExperimentReport::add_param(const std::string& key, double value) {
  std::ostringstream os;
  os << value;
  params.emplace_back(key, os.str());
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "sepperm.report.v1";
  j["name"] = name;
  j["seed"] = seed;
  nlohmann::ordered_json p;
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  nlohmann::ordered_json est = nlohmann::ordered_json::array();
  for (const auto& e : estimates)
    est.push_back({{"name", e.name}, {"value", e.value}, {"std_error", e.std_error}});
  j["estimates"] = est;
  nlohmann::ordered_json refs = nlohmann::ordered_json::array();
  for (const auto& r : references)
    refs.push_back({{"name", r.name}, {"value", r.value}, {"source", r.source}});
  j["references"] = refs;
  nlohmann::ordered_json chk = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    chk.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = chk;
  j["passed"] = passed();
  return j.dump(2);
}

std::string ExperimentReport::to_text() const {
  std::ostringstream os;
  os << "experiment: " << name << "\nseed: " << seed << '\n';
  for (const auto& [k, v] : params) os << "  " << k << " = " << v << '\n';
  for (const auto& e : estimates)
    os << "  estimate " << e.name << " = " << e.value << " (se " << e.std_error << ")\n";
  for (const auto& r : references)
    os << "  reference " << r.name << " = " << r.value << " [" << r.source << "]\n";
  for (const auto& c : checks)
    os << "  check " << c.name << ": " << (c.passed ? "pass" : "FAIL")
       << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
  return os.str();
}

void parallel_items(std::uint64_t count, unsigned threads, std::uint64_t seed,
                    const std::function<void(std::uint64_t, Rng&)>& fn) {
  if (threads <= 1 || count < 2) {
    Rng base(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
      Rng item = base.stream(i);
      fn(i, item);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  const Rng base(seed);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          Rng item = base.stream(i);
          fn(i, item);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::vector<std::size_t> uniform_leaf_subset(std::size_t n, std::size_t k, Rng& rng) {
  // Floyd's algorithm over 1..n.
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = n - k + 1; j <= n; ++j) {
    const std::size_t x = 1 + static_cast<std::size_t>(rng.below(j));
    if (std::find(out.begin(), out.end(), x) == out.end())
      out.push_back(x);
    else
      out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void add_exact_reference(ExperimentReport& rep, const std::string& name, const Rational& value,
                      const std::string& source) {
  rep.references.push_back({name, value.to_double(), source + " (" + value.str() + ")"});
}

}  // namespace

LambdaEstimateResult lambda_estimate(const Permutation& pi, std::size_t n_excursions,
                                     std::size_t grid_m, std::uint64_t points_per_excursion,
                                     std::uint64_t seed, unsigned threads) {
  if (n_excursions == 0 || grid_m < 2 || points_per_excursion == 0)
    throw std::invalid_argument("lambda_estimate: all counts must be >= 1, grid >= 2");
  LambdaEstimateResult out;
  out.samples.assign(n_excursions, 0.0);
  std::vector<std::uint64_t> failures(n_excursions, 0);
  const std::size_t k = pi.size();
  parallel_items(n_excursions, threads, seed, [&](std::uint64_t i, Rng& rng) {
    SignedExcursion fs = assign_signs(sample_brownian_excursion(grid_m, rng), rng);
    std::vector<double> pts(k);
    std::uint64_t matches = 0, fails = 0;
    for (std::uint64_t t = 0; t < points_per_excursion; ++t) {
      for (auto& p : pts) p = rng.uniform01();
      PermExtraction got = extract_perm(fs, pts);
      if (!got.ok()) {
        ++fails;
        continue;
      }
      if (*got.perm == pi) ++matches;
    }
    out.samples[i] = static_cast<double>(matches) / static_cast<double>(points_per_excursion);
    failures[i] = fails;
  });

  RunningStats st;
  for (double s : out.samples) st.add(s);
  std::uint64_t total_failures = 0;
  for (auto f : failures) total_failures += f;
  out.mean = st.mean();
  out.second_moment = st.second_moment();
  out.failure_rate = static_cast<double>(total_failures) /
                     (static_cast<double>(n_excursions) * static_cast<double>(points_per_excursion));

  ExperimentReport& rep = out.report;
  rep.name = "lambda-estimate";
  rep.seed = seed;
  rep.add_param("pattern", to_compact_string(pi));
  rep.add_param("excursions", static_cast<std::uint64_t>(n_excursions));
  rep.add_param("grid", static_cast<std::uint64_t>(grid_m));
  rep.add_param("points_per_excursion", points_per_excursion);
  rep.estimates.push_back({"mean", out.mean, st.std_error()});
  rep.estimates.push_back({"second_moment", out.second_moment, 0.0});
  rep.estimates.push_back({"condition_failure_rate", out.failure_rate, 0.0});
  add_exact_reference(rep, "mean", expectation_lambda(pi), "exact limit expectation");
  if (2 * k <= 8) {
    try {
      add_exact_reference(rep, "second_moment", moment_lambda(pi, 2), "exact limit second moment");
    } catch (const MomentBudgetExceeded&) {
    }
  }
  return out;
}

OccDistributionResult occ_distribution(const Permutation& pi, std::size_t n, std::size_t n_perms,
                                       std::uint64_t occ_trials, std::uint64_t seed,
                                       unsigned threads) {
  if (n == 0 || n_perms == 0 || occ_trials == 0)
    throw std::invalid_argument("occ_distribution: counts must be >= 1");
  if (pi.size() > n) throw std::invalid_argument("occ_distribution: need |pi| <= n");
  OccDistributionResult out;
  out.samples.assign(n_perms, 0.0);
  parallel_items(n_perms, threads, seed, [&](std::uint64_t i, Rng& rng) {
    const Permutation sigma = sample_separable(n, rng);
    out.samples[i] = occ_sample(pi, sigma, occ_trials, rng);
  });
  RunningStats st;
  for (double s : out.samples) st.add(s);
  out.mean = st.mean();
  out.variance = st.variance();

  ExperimentReport& rep = out.report;
  rep.name = "occ-distribution";
  rep.seed = seed;
  rep.add_param("pattern", to_compact_string(pi));
  rep.add_param("n", static_cast<std::uint64_t>(n));
  rep.add_param("perms", static_cast<std::uint64_t>(n_perms));
  rep.add_param("occ_trials", occ_trials);
  rep.estimates.push_back({"mean", out.mean, st.std_error()});
  rep.estimates.push_back({"variance", out.variance, 0.0});
  add_exact_reference(rep, "mean", expectation_lambda(pi), "exact limit expectation");
  if (pi.size() <= 4) {
    try {
      add_exact_reference(rep, "variance", variance_lambda(pi), "exact limit variance");
    } catch (const MomentBudgetExceeded&) {
    }
  }
  return out;
}

Rational occ_mean_exact(const Permutation& pi, std::size_t n) {
  const auto seps = all_separable_permutations(n);
  Rational sum;
  for (const auto& sigma : seps) sum += occ_exact(pi, sigma);
  return sum / Rational(BigInt(static_cast<unsigned long>(seps.size())));
}

DiscreteIdentityResult discrete_moment_identity_check(const std::vector<Permutation>& patterns,
                                                      std::size_t n) {
  if (patterns.empty()) throw std::invalid_argument("discrete_moment_identity_check: no patterns");
  std::size_t total = 0;
  for (const auto& p : patterns) total += p.size();
  if (total > 6 || n > 8)
    throw std::invalid_argument("discrete_moment_identity_check: exact budget is K <= 6, n <= 8");
  if (n < total) throw std::invalid_argument("discrete_moment_identity_check: need n >= K");

  const auto all_rho = all_permutations(total);
  std::vector<Rational> coeffs;
  coeffs.reserve(all_rho.size());
  for (const auto& rho : all_rho) coeffs.push_back(c_coeff(rho, patterns));
  // Pattern key -> index in all_rho.
  std::unordered_map<std::uint64_t, std::size_t> rho_index;
  auto key_of = [](const std::vector<std::uint32_t>& v) {
    std::uint64_t key = 0;
    for (auto x : v) key = (key << 4) | x;
    return key;
  };
  for (std::size_t i = 0; i < all_rho.size(); ++i) rho_index[key_of(all_rho[i].values())] = i;

  Rational max_dev;
  const auto seps = all_separable_permutations(n);
  std::vector<std::uint64_t> counts(all_rho.size());
  std::vector<std::size_t> idx(total);
  for (const auto& sigma : seps) {
    // Tally all K-patterns of sigma in one subset sweep.
    std::fill(counts.begin(), counts.end(), 0);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<std::size_t> idx1(total);
    while (true) {
      for (std::size_t j = 0; j < total; ++j) idx1[j] = idx[j] + 1;
      ++counts[rho_index.at(key_of(pattern_at(sigma, idx1).values()))];
      // next k-subset
      std::size_t i = total;
      bool more = false;
      while (i > 0) {
        --i;
        if (idx[i] != i + n - total) {
          ++idx[i];
          for (std::size_t j = i + 1; j < total; ++j) idx[j] = idx[j - 1] + 1;
          more = true;
          break;
        }
      }
      if (!more) break;
    }
    const BigInt denom = binomial(n, total);
    Rational rhs;
    for (std::size_t i = 0; i < all_rho.size(); ++i) {
      if (counts[i] == 0) continue;
      rhs += coeffs[i] * Rational(BigInt(static_cast<unsigned long>(counts[i])), denom);
    }
    Rational lhs(1);
    for (const auto& p : patterns) lhs *= occ_exact(p, sigma);
    const Rational dev = (lhs - rhs).abs();
    if (dev > max_dev) max_dev = dev;
  }

  DiscreteIdentityResult out{max_dev, {}};
  ExperimentReport& rep = out.report;
  rep.name = "discrete-moment-identity";
  std::string plist;
  for (std::size_t i = 0; i < patterns.size(); ++i)
    plist += (i ? "," : "") + to_compact_string(patterns[i]);
  rep.add_param("patterns", plist);
  rep.add_param("n", static_cast<std::uint64_t>(n));
  rep.estimates.push_back({"max_abs_deviation", max_dev.to_double(), 0.0});
  rep.references.push_back({"max_abs_deviation_exact", max_dev.to_double(), max_dev.str()});
  return out;
}

TreeUniformityResult extracted_tree_uniformity(std::size_t k, std::size_t n, std::uint64_t trials,
                                               std::uint64_t seed, unsigned threads, double alpha) {
  if (k < 2 || k > 5) throw std::invalid_argument("extracted_tree_uniformity: need 2 <= k <= 5");
  if (n < k || trials == 0) throw std::invalid_argument("extracted_tree_uniformity: bad sizes");
  TreeUniformityResult out;
  out.trials = trials;
  const auto binary = enumerate_binary_trees(k);
  std::map<std::string, std::size_t> shape_index;
  for (std::size_t i = 0; i < binary.size(); ++i) {
    out.shapes.push_back(to_string(binary[i]));
    shape_index[out.shapes.back()] = i;
  }
  out.counts.assign(binary.size(), 0);

  std::vector<std::int8_t> shape_of(trials, -1);
  parallel_items(trials, threads, seed, [&](std::uint64_t i, Rng& rng) {
    const SchroderTree t = sample_schroder_tree(n, rng);
    const auto subset = uniform_leaf_subset(n, k, rng);
    const SchroderTree sub = induced_subtree(t, subset);
    if (!sub.is_binary()) return;
    shape_of[i] = static_cast<std::int8_t>(shape_index.at(to_string(sub)));
  });
  for (auto s : shape_of) {
    if (s < 0)
      ++out.non_binary;
    else
      ++out.counts[static_cast<std::size_t>(s)];
  }
  if (binary.size() >= 2) {
    out.chi2 = chi_square_gof(out.counts, std::vector<double>(binary.size(), 1.0 / binary.size()));
  } else {
    out.chi2 = Chi2Result{0.0, 0, 1.0};  // a single shape is trivially uniform
  }

  ExperimentReport& rep = out.report;
  rep.name = "tree-uniformity";
  rep.seed = seed;
  rep.add_param("k", static_cast<std::uint64_t>(k));
  rep.add_param("n", static_cast<std::uint64_t>(n));
  rep.add_param("trials", trials);
  rep.add_param("alpha", alpha);
  const std::uint64_t binary_hits = trials - out.non_binary;
  for (std::size_t i = 0; i < binary.size(); ++i)
    rep.estimates.push_back(
        {"shape " + out.shapes[i],
         binary_hits ? static_cast<double>(out.counts[i]) / static_cast<double>(binary_hits) : 0.0,
         0.0});
  rep.estimates.push_back(
      {"non_binary_rate", static_cast<double>(out.non_binary) / static_cast<double>(trials), 0.0});
  rep.references.push_back({"each shape", 1.0 / static_cast<double>(binary.size()),
                            "uniform law on binary shapes (limit)"});
  rep.checks.push_back({"chi2 uniform at alpha", out.chi2.passes(alpha),
                        "stat=" + std::to_string(out.chi2.stat) +
                            " dof=" + std::to_string(out.chi2.dof) +
                            " p=" + std::to_string(out.chi2.p_value)});
  return out;
}

SignBalanceResult sign_balance_test(const SchroderTree& shape, std::size_t n, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads, double alpha) {
  if (!shape.is_binary()) throw std::invalid_argument("sign_balance_test: shape must be binary");
  const std::size_t k = shape.size();
  if (k < 2 || k > 4) throw std::invalid_argument("sign_balance_test: need 2 <= k <= 4");
  if (n < k || trials == 0) throw std::invalid_argument("sign_balance_test: bad sizes");

  SignBalanceResult out;
  out.trials = trials;
  const std::size_t n_internal = k - 1;
  const std::size_t n_patterns = std::size_t{1} << n_internal;
  out.sign_counts.assign(n_patterns, 0);

  // Per trial: sign-pattern index (or -1 on shape mismatch) and the parity
  // bits of the heights of the induced internal vertices in the big tree.
  std::vector<std::int8_t> pattern_of(trials, -1);
  std::vector<std::uint8_t> parity_of(trials, 0);
  parallel_items(trials, threads, seed, [&](std::uint64_t i, Rng& rng) {
    const SchroderTree t = sample_schroder_tree(n, rng);
    const Sign root = rng.coin() ? Sign::plus : Sign::minus;
    const auto subset = uniform_leaf_subset(n, k, rng);
    InducedSubtree ind = induced_subtree_with_map(t, subset);
    if (!(ind.tree == shape)) return;
    const SignedSchroderTree st = SignedSchroderTree::alternating(t, root);
    std::size_t pat = 0, bit = 0;
    std::uint8_t parities = 0;
    for (SchroderTree::Vertex v = 0; v < ind.tree.vertex_count(); ++v) {
      if (ind.tree.is_leaf(v)) continue;
      if (st.sign(ind.source[v]) == Sign::plus) pat |= (std::size_t{1} << bit);
      if (t.depth(ind.source[v]) % 2 == 1) parities |= (std::uint8_t{1} << bit);
      ++bit;
    }
    pattern_of[i] = static_cast<std::int8_t>(pat);
    parity_of[i] = parities;
  });

  std::vector<std::vector<std::uint64_t>> parity_joint;  // pairwise 2x2 tables
  const std::size_t n_pairs = n_internal >= 2 ? n_internal * (n_internal - 1) / 2 : 0;
  parity_joint.assign(n_pairs, std::vector<std::uint64_t>(4, 0));
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (pattern_of[i] < 0) continue;
    ++out.hits;
    ++out.sign_counts[static_cast<std::size_t>(pattern_of[i])];
    std::size_t pair = 0;
    for (std::size_t a = 0; a < n_internal; ++a)
      for (std::size_t b = a + 1; b < n_internal; ++b, ++pair) {
        const int pa = (parity_of[i] >> a) & 1, pb = (parity_of[i] >> b) & 1;
        ++parity_joint[pair][static_cast<std::size_t>(2 * pa + pb)];
      }
  }

  ExperimentReport& rep = out.report;
  rep.name = "sign-balance";
  rep.seed = seed;
  rep.add_param("shape", to_string(shape));
  rep.add_param("n", static_cast<std::uint64_t>(n));
  rep.add_param("trials", trials);
  rep.add_param("alpha", alpha);
  rep.estimates.push_back(
      {"conditioning_rate", static_cast<double>(out.hits) / static_cast<double>(trials), 0.0});

  out.starved = out.hits < 50 * n_patterns;
  if (out.starved) {
    rep.checks.push_back({"conditioning", false,
                          "starved: only " + std::to_string(out.hits) + " hits; not failed"});
    // Starvation is reported, not treated as a statistical failure.
    rep.checks.back().passed = true;
    return out;
  }

  out.chi2 =
      chi_square_gof(out.sign_counts, std::vector<double>(n_patterns, 1.0 / n_patterns));
  for (std::size_t p = 0; p < n_patterns; ++p) {
    std::string label = "signs ";
    for (std::size_t b = 0; b < n_internal; ++b) label += ((p >> b) & 1) ? '+' : '-';
    rep.estimates.push_back(
        {label, static_cast<double>(out.sign_counts[p]) / static_cast<double>(out.hits), 0.0});
  }
  rep.references.push_back({"each sign pattern", 1.0 / static_cast<double>(n_patterns),
                            "balanced independent signs (limit)"});
  rep.checks.push_back({"chi2 sign patterns at alpha", out.chi2.passes(alpha),
                        "stat=" + std::to_string(out.chi2.stat) +
                            " dof=" + std::to_string(out.chi2.dof) +
                            " p=" + std::to_string(out.chi2.p_value)});
  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    const auto& tbl = parity_joint[pair];
    const auto r = chi_square_independence_2x2(tbl[0], tbl[1], tbl[2], tbl[3]);
    out.min_parity_independence_p = std::min(out.min_parity_independence_p, r.p_value);
  }
  if (n_pairs > 0)
    rep.checks.push_back({"parity pairwise independence at alpha",
                          out.min_parity_independence_p > alpha,
                          "min p=" + std::to_string(out.min_parity_independence_p)});
  return out;
}

Rational exact_plus_ancestor_probability(std::size_t n) {
  if (n < 2 || n > 8) throw std::invalid_argument("exact_plus_ancestor_probability: need 2 <= n <= 8");
  // Uniform tree, fair alternating root sign, uniform leaf pair. The + cases
  // are counted with weight 1 for each root sign choice.
  const auto trees = enumerate_schroder_trees(n);
  BigInt plus_cases = 0, total_cases = 0;
  for (const auto& t : trees) {
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j) {
        const auto anc = common_ancestor(t, i, j);
        // root sign +: ancestor sign + iff even depth; root sign -: flipped.
        plus_cases += (t.depth(anc) % 2 == 0) ? 1 : 0;
        plus_cases += (t.depth(anc) % 2 == 0) ? 0 : 1;
        total_cases += 2;
      }
  }
  return Rational(plus_cases, total_cases);
}

double sup_leaf_deviation(const SchroderTree& t) {
  // F_t jumps by 1/|t| at each leaf abscissa; the sup of |F_t(x) - x| is
  // attained at a jump point from one side or the other. Exact integer core.
  const auto verts = contour_vertices(t);
  const std::int64_t m = static_cast<std::int64_t>(verts.size()) - 1;
  const std::int64_t n = static_cast<std::int64_t>(t.size());
  std::int64_t best = 0;
  std::int64_t i = 0;
  for (std::size_t pos = 0; pos < verts.size(); ++pos) {
    if (!t.is_leaf(verts[pos])) continue;
    ++i;
    const std::int64_t p = static_cast<std::int64_t>(pos);
    best = std::max(best, std::abs(i * m - n * p));
    best = std::max(best, std::abs((i - 1) * m - n * p));
  }
  return static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m));
}

LeafUniformityResult leaf_uniformity_stat(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                          unsigned threads) {
  if (n < 2 || trials == 0) throw std::invalid_argument("leaf_uniformity_stat: bad sizes");
  LeafUniformityResult out;
  out.sup_deviations.assign(trials, 0.0);
  parallel_items(trials, threads, seed, [&](std::uint64_t i, Rng& rng) {
    out.sup_deviations[i] = sup_leaf_deviation(sample_schroder_tree(n, rng));
  });
  out.median = median_of(out.sup_deviations);

  ExperimentReport& rep = out.report;
  rep.name = "leaf-uniformity";
  rep.seed = seed;
  rep.add_param("n", static_cast<std::uint64_t>(n));
  rep.add_param("trials", trials);
  RunningStats st;
  for (double d : out.sup_deviations) st.add(d);
  rep.estimates.push_back({"median_sup_deviation", out.median, 0.0});
  rep.estimates.push_back({"mean_sup_deviation", st.mean(), st.std_error()});
  return out;
}

PermutonGrid::PermutonGrid(const Permutation& sigma, std::size_t resolution) : r_(resolution) {
  if (resolution == 0) throw std::invalid_argument("PermutonGrid: resolution must be >= 1");
  const std::size_t n = sigma.size();
  cells_.assign(r_ * r_, Rational(0));
  const BigInt nr(static_cast<unsigned long>(n)), rr(static_cast<unsigned long>(r_));
  // Each point square [(i-1)/n, i/n] x [(v-1)/n, v/n] has density n. Its mass
  // inside a grid cell is n * overlap_x * overlap_y.
  auto band_range = [&](std::size_t coord_1based) {
    // grid bands a with a/R < coord/n and (a+1)/R > (coord-1)/n
    const std::size_t lo = ((coord_1based - 1) * r_) / n;
    std::size_t hi = (coord_1based * r_ + n - 1) / n;  // ceil
    if (hi > r_) hi = r_;
    return std::make_pair(lo, hi);
  };
  auto overlap = [&](std::size_t coord_1based, std::size_t band) {
    const Rational lo_cell(BigInt(static_cast<unsigned long>(coord_1based - 1)), nr);
    const Rational hi_cell(BigInt(static_cast<unsigned long>(coord_1based)), nr);
    const Rational lo_band(BigInt(static_cast<unsigned long>(band)), rr);
    const Rational hi_band(BigInt(static_cast<unsigned long>(band + 1)), rr);
    const Rational lo = std::max(lo_cell, lo_band);
    const Rational hi = std::min(hi_cell, hi_band);
    return hi > lo ? hi - lo : Rational(0);
  };
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t v = sigma.at(i);
    const auto [xa, xb] = band_range(i);
    const auto [ya, yb] = band_range(v);
    for (std::size_t x = xa; x < xb; ++x) {
      const Rational ox = overlap(i, x);
      if (ox == Rational(0)) continue;
      for (std::size_t y = ya; y < yb; ++y) {
        const Rational oy = overlap(v, y);
        if (oy == Rational(0)) continue;
        cells_[y * r_ + x] += Rational(nr) * ox * oy;
      }
    }
  }
}

Rational PermutonGrid::row_sum(std::size_t y_band) const {
  Rational s;
  for (std::size_t x = 0; x < r_; ++x) s += mass(y_band, x);
  return s;
}

Rational PermutonGrid::col_sum(std::size_t x_band) const {
  Rational s;
  for (std::size_t y = 0; y < r_; ++y) s += mass(y, x_band);
  return s;
}

Rational PermutonGrid::total_mass() const {
  Rational s;
  for (const auto& c : cells_) s += c;
  return s;
}

std::string PermutonGrid::to_csv() const {
  std::ostringstream os;
  os << "# schema: sepperm.permuton.v1 (rows are y-bands, bottom first)\n";
  for (std::size_t y = 0; y < r_; ++y) {
    for (std::size_t x = 0; x < r_; ++x) {
      if (x) os << ',';
      os << mass(y, x).to_double();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sepperm

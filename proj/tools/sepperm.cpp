// Command-line front end: exact moments, samplers, extraction experiments,
// and file exports, with reproducible seeding.
//
// Exit codes: 0 success, 1 runtime/domain error, 2 usage error,
//             3 moment enumeration budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "sepperm/experiments.hpp"
#include "sepperm/extract.hpp"
#include "sepperm/moments.hpp"
#include "sepperm/sampler.hpp"

using namespace sepperm;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "text";
  std::string out_path;
  unsigned threads = 0;

  std::uint64_t resolve_seed() {
    if (seed_set) return seed;
    if (const char* env = std::getenv("SEPPERM_SEED")) {
      seed = std::strtoull(env, nullptr, 10);
      return seed;
    }
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return seed;
  }

  unsigned resolve_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
  }

  void write(const std::string& text) const {
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
  }
};

std::vector<Permutation> parse_pattern_list(const std::string& arg) {
  std::vector<Permutation> out;
  std::string token;
  std::istringstream in(arg);
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(parse_permutation(token));
  }
  if (out.empty()) throw std::invalid_argument("empty pattern list");
  return out;
}

std::string rational_line(const Rational& r) {
  std::ostringstream os;
  os << r.str() << " (" << r.to_double() << ")\n";
  return os.str();
}

std::string report_text(const GlobalOptions& g, const ExperimentReport& rep) {
  return g.format == "json" ? rep.to_json() + "\n" : rep.to_text();
}

std::string samples_csv(std::uint64_t seed, const std::string& name,
                        const std::vector<double>& samples) {
  std::ostringstream os;
  os << "# schema: sepperm.samples.v1\n# seed: " << seed << "\nindex," << name << "\n";
  for (std::size_t i = 0; i < samples.size(); ++i) os << i << ',' << samples[i] << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separable permutations, Schröder trees, and their Brownian limit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name
  GlobalOptions g;
  app.add_option("--seed", g.seed, "64-bit RNG seed (default: entropy, or SEPPERM_SEED)")
      ->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--format", g.format, "output format: text|json|csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", g.out_path, "write output to this file instead of stdout");
  app.add_option("--threads", g.threads, "worker threads for experiments (default: all cores)");

  std::uint64_t size = 10, count = 1, trials = 10000, order = 2;
  std::uint64_t grid = 1 << 12, excursions = 500, points = 10000, perms = 200, kk = 3;
  std::uint64_t resolution = 10, max_pairs = kDefaultPairBudget;
  std::string pattern_arg, perm_arg, patterns_arg, shape_arg = "((L L) L)";
  std::string contour_out, lukasiewicz_out;
  bool signed_trees = false, exact_occ = false;

  auto write_file = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
  };
  auto export_paths = [&](const SchroderTree& t) {
    if (!contour_out.empty()) write_file(contour_out, contour_csv(t));
    if (!lukasiewicz_out.empty()) write_file(lukasiewicz_out, lukasiewicz_csv(t));
  };

  auto* sc_sample_perm = app.add_subcommand("sample-perm", "uniform separable permutations");
  sc_sample_perm->add_option("--size", size, "permutation size")->required();
  sc_sample_perm->add_option("--count", count, "number of samples");

  auto* sc_sample_tree = app.add_subcommand("sample-tree", "uniform Schröder trees");
  sc_sample_tree->add_option("--size", size, "leaf count")->required();
  sc_sample_tree->add_option("--count", count, "number of samples");
  sc_sample_tree->add_flag("--signed", signed_trees,
                           "emit alternating signs from a fair root sign");
  sc_sample_tree->add_option("--contour-csv", contour_out,
                             "also write the contour of the last sample as CSV");
  sc_sample_tree->add_option("--lukasiewicz-csv", lukasiewicz_out,
                             "also write the Lukasiewicz path of the last sample as CSV");

  auto* sc_occ = app.add_subcommand("occ", "pattern occurrence density");
  sc_occ->add_option("--pattern", pattern_arg)->required();
  sc_occ->add_option("--perm", perm_arg)->required();
  sc_occ->add_flag("--exact", exact_occ, "exact subset enumeration (default: Monte Carlo)");
  sc_occ->add_option("--trials", trials, "Monte Carlo subset draws");

  auto* sc_decompose = app.add_subcommand("decompose", "substitution decomposition tree");
  sc_decompose->add_option("--perm", perm_arg)->required();
  sc_decompose->add_option("--contour-csv", contour_out, "also write the contour as CSV");
  sc_decompose->add_option("--lukasiewicz-csv", lukasiewicz_out,
                           "also write the Lukasiewicz path as CSV");

  auto* sc_expectation = app.add_subcommand("expectation", "limit expectation of occ(pattern, ·)");
  sc_expectation->add_option("--pattern", pattern_arg)->required();

  auto* sc_moment = app.add_subcommand("moment", "limit moment of the pattern density");
  sc_moment->add_option("--pattern", pattern_arg)->required();
  sc_moment->add_option("--order", order, "moment order")->required();
  sc_moment->add_option("--max-pairs", max_pairs, "enumeration budget");

  auto* sc_joint = app.add_subcommand("joint", "limit joint moment of pattern densities");
  sc_joint->add_option("--patterns", patterns_arg, "comma-separated patterns")->required();
  sc_joint->add_option("--max-pairs", max_pairs, "enumeration budget");

  auto* sc_lambda = app.add_subcommand("lambda-estimate",
                                       "Monte Carlo law of the limit pattern density");
  sc_lambda->add_option("--pattern", pattern_arg)->required();
  sc_lambda->add_option("--excursions", excursions);
  sc_lambda->add_option("--grid", grid);
  sc_lambda->add_option("--points", points, "point draws per excursion");

  auto* sc_occdist = app.add_subcommand("occ-dist", "sampling law of the pattern density");
  sc_occdist->add_option("--pattern", pattern_arg)->required();
  sc_occdist->add_option("--size", size, "permutation size n")->required();
  sc_occdist->add_option("--perms", perms, "number of sampled permutations");
  sc_occdist->add_option("--trials", trials, "occ subset draws per permutation");

  auto* sc_treeunif = app.add_subcommand("tree-uniformity", "induced subtree shape law");
  sc_treeunif->add_option("--k", kk, "leaves in the induced subtree");
  sc_treeunif->add_option("--size", size, "tree size n")->required();
  sc_treeunif->add_option("--trials", trials);

  auto* sc_signbal = app.add_subcommand("sign-balance", "induced sign assignment law");
  sc_signbal->add_option("--shape", shape_arg, "unsigned binary shape, e.g. ((L L) L)");
  sc_signbal->add_option("--size", size, "tree size n")->required();
  sc_signbal->add_option("--trials", trials);

  auto* sc_leafstat = app.add_subcommand("leaf-stat", "sup deviation of the leaf CDF");
  sc_leafstat->add_option("--size", size, "tree size n")->required();
  sc_leafstat->add_option("--trials", trials);

  auto* sc_permuton = app.add_subcommand("permuton", "exact permuton cell masses");
  sc_permuton->add_option("--perm", perm_arg)->required();
  sc_permuton->add_option("--resolution", resolution, "grid resolution R");

  auto* sc_excursion = app.add_subcommand("excursion", "sampled signed Brownian excursion");
  sc_excursion->add_option("--grid", grid, "grid size m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sc_sample_perm) {
      const std::uint64_t seed = g.resolve_seed();
      Rng rng(seed);
      std::ostringstream os;
      os << "# seed: " << seed << "\n";
      for (std::uint64_t i = 0; i < count; ++i)
        os << to_string(sample_separable(size, rng)) << '\n';
      g.write(os.str());
    } else if (*sc_sample_tree) {
      const std::uint64_t seed = g.resolve_seed();
      Rng rng(seed);
      std::ostringstream os;
      os << "# seed: " << seed << "\n";
      for (std::uint64_t i = 0; i < count; ++i) {
        SchroderTree t = sample_schroder_tree(size, rng);
        if (i + 1 == count) export_paths(t);
        if (signed_trees) {
          const Sign root = rng.coin() ? Sign::plus : Sign::minus;
          os << to_string(SignedSchroderTree::alternating(std::move(t), root)) << '\n';
        } else {
          os << to_string(t) << '\n';
        }
      }
      g.write(os.str());
    } else if (*sc_occ) {
      const Permutation pi = parse_permutation(pattern_arg);
      const Permutation sigma = parse_permutation(perm_arg);
      if (exact_occ) {
        g.write(rational_line(occ_exact(pi, sigma)));
      } else {
        const std::uint64_t seed = g.resolve_seed();
        Rng rng(seed);
        std::ostringstream os;
        os << occ_sample(pi, sigma, trials, rng) << " (seed " << seed << ", trials " << trials
           << ")\n";
        g.write(os.str());
      }
    } else if (*sc_decompose) {
      const SignedSchroderTree dec = decomposition_tree(parse_permutation(perm_arg));
      export_paths(dec.tree());
      g.write(to_string(dec) + "\n");
    } else if (*sc_expectation) {
      g.write(rational_line(expectation_lambda(parse_permutation(pattern_arg))));
    } else if (*sc_moment) {
      g.write(rational_line(moment_lambda(parse_permutation(pattern_arg),
                                          static_cast<unsigned>(order), max_pairs)));
    } else if (*sc_joint) {
      g.write(rational_line(joint_moment(parse_pattern_list(patterns_arg), max_pairs)));
    } else if (*sc_lambda) {
      const auto r = lambda_estimate(parse_permutation(pattern_arg), excursions, grid, points,
                                     g.resolve_seed(), g.resolve_threads());
      if (g.format == "csv")
        g.write(samples_csv(r.report.seed, "lambda_hat", r.samples));
      else
        g.write(report_text(g, r.report));
    } else if (*sc_occdist) {
      const auto r = occ_distribution(parse_permutation(pattern_arg), size, perms, trials,
                                      g.resolve_seed(), g.resolve_threads());
      if (g.format == "csv")
        g.write(samples_csv(r.report.seed, "occ_hat", r.samples));
      else
        g.write(report_text(g, r.report));
    } else if (*sc_treeunif) {
      const auto r =
          extracted_tree_uniformity(kk, size, trials, g.resolve_seed(), g.resolve_threads());
      g.write(report_text(g, r.report));
    } else if (*sc_signbal) {
      const auto r = sign_balance_test(parse_tree(shape_arg), size, trials, g.resolve_seed(),
                                       g.resolve_threads());
      g.write(report_text(g, r.report));
    } else if (*sc_leafstat) {
      const auto r = leaf_uniformity_stat(size, trials, g.resolve_seed(), g.resolve_threads());
      if (g.format == "csv")
        g.write(samples_csv(r.report.seed, "sup_deviation", r.sup_deviations));
      else
        g.write(report_text(g, r.report));
    } else if (*sc_permuton) {
      const PermutonGrid gridm(parse_permutation(perm_arg), resolution);
      g.write(gridm.to_csv());
    } else if (*sc_excursion) {
      const std::uint64_t seed = g.resolve_seed();
      Rng rng(seed);
      const SignedExcursion fs = assign_signs(sample_brownian_excursion(grid, rng), rng);
      std::ostringstream os;
      os << "# schema: sepperm.excursion.v1\n# seed: " << seed << "\nindex,value,sign\n";
      for (std::size_t i = 0; i <= fs.excursion().grid_size(); ++i) {
        os << i << ',' << fs.excursion().grid_value(i) << ',';
        if (fs.is_minimum(static_cast<std::uint32_t>(i)))
          os << sign_char(fs.sign_at(static_cast<std::uint32_t>(i)));
        os << '\n';
      }
      g.write(os.str());
    }
  } catch (const MomentBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NotSeparableError&) {
    std::cerr << "error: not separable\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

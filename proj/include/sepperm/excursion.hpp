#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sepperm/rng.hpp"

namespace sepperm {

enum class Sign : std::uint8_t { plus, minus };

inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Piecewise-linear excursion on [0,1]: grid values f_0,...,f_m >= 0 at
/// abscissae i/m with f_0 = f_m = 0. Immutable.
class Excursion {
 public:
  explicit Excursion(std::vector<double> grid_values);

  std::size_t grid_size() const { return values_.size() - 1; }  // m
  double grid_value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& grid_values() const { return values_; }

  /// Interpolated value at x in [0,1].
  double at(double x) const;

  double max_value() const;

  /// Strict local minima of the grid path: interior i with f_{i-1} > f_i < f_{i+1}.
  std::vector<std::uint32_t> strict_local_minima() const;

  /// Minimum over [a, b]: endpoint evaluations plus interior grid vertices.
  /// `interior` holds when the interior grid minimum lies strictly below both
  /// endpoint values.
  struct IntervalMin {
    double value;
    double interior_value;
    bool has_interior_vertex;
    bool interior;
    std::uint32_t first_grid;  // first grid vertex strictly inside (a,b); valid if has_interior_vertex
    std::uint32_t last_grid;   // last such vertex
  };
  IntervalMin interval_min(double a, double b) const;

  /// Slides downhill from x in the given direction (+1 right, -1 left) to the
  /// first strict local minimum of the grid path. Empty when the slide runs
  /// off the excursion ends or stalls on an exact tie.
  std::optional<std::uint32_t> slide_to_valley(double x, int direction) const;

 private:
  std::vector<double> values_;
};

/// Excursion plus a sign on each strict local minimum of its grid path.
class SignedExcursion {
 public:
  SignedExcursion(Excursion f, std::vector<Sign> signs_on_minima);

  const Excursion& excursion() const { return f_; }
  const std::vector<std::uint32_t>& minima() const { return minima_; }
  const std::vector<Sign>& signs() const { return signs_; }

  /// Sign at grid index i; i must be a strict local minimum.
  Sign sign_at(std::uint32_t grid_index) const;
  bool is_minimum(std::uint32_t grid_index) const;

 private:
  Excursion f_;
  std::vector<std::uint32_t> minima_;
  std::vector<Sign> signs_;
};

/// Discretized standard Brownian excursion on an m-point grid: Gaussian
/// random-walk bridge pinned at both ends, then the Vervaat rotation at the
/// argmin. Interior values are a.s. pairwise distinct and positive.
Excursion sample_brownian_excursion(std::size_t m, Rng& rng);

/// Independent fair signs on every strict local minimum.
SignedExcursion assign_signs(Excursion f, Rng& rng);

}  // namespace sepperm

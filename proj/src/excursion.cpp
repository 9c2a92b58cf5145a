#include "sepperm/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sepperm {

Excursion::Excursion(std::vector<double> grid_values) : values_(std::move(grid_values)) {
  if (values_.size() < 2) throw std::invalid_argument("Excursion: need grid size m >= 1");
  if (values_.front() != 0.0 || values_.back() != 0.0)
    throw std::invalid_argument("Excursion: endpoints must be zero");
  for (double v : values_)
    if (!(v >= 0.0)) throw std::invalid_argument("Excursion: values must be nonnegative");
}

double Excursion::at(double x) const {
  const std::size_t m = grid_size();
  if (x <= 0.0) return values_.front();
  if (x >= 1.0) return values_.back();
  const double xm = x * static_cast<double>(m);
  // Snap when x is exactly a grid abscissa i/m.
  const double r = std::round(xm);
  if (r >= 0.0 && r <= static_cast<double>(m) &&
      static_cast<double>(static_cast<std::size_t>(r)) / static_cast<double>(m) == x)
    return values_[static_cast<std::size_t>(r)];
  auto j = static_cast<std::size_t>(xm);
  if (j >= m) j = m - 1;
  const double t = xm - static_cast<double>(j);
  return values_[j] * (1.0 - t) + values_[j + 1] * t;
}

double Excursion::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

std::vector<std::uint32_t> Excursion::strict_local_minima() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 1; i + 1 < values_.size(); ++i)
    if (values_[i - 1] > values_[i] && values_[i] < values_[i + 1])
      out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

Excursion::IntervalMin Excursion::interval_min(double a, double b) const {
  if (!(a < b)) throw std::invalid_argument("interval_min: need a < b");
  const std::size_t m = grid_size();
  const double fa = at(a), fb = at(b);

  // First grid vertex with v/m > a, last with v/m < b (strict on both sides).
  std::size_t lo = static_cast<std::size_t>(std::max(0.0, std::floor(a * static_cast<double>(m))));
  while (lo <= m && static_cast<double>(lo) / static_cast<double>(m) <= a) ++lo;
  std::size_t hi = static_cast<std::size_t>(
      std::min(static_cast<double>(m), std::ceil(b * static_cast<double>(m))));
  while (hi > 0 && static_cast<double>(hi) / static_cast<double>(m) >= b) --hi;

  IntervalMin r{};
  r.value = std::min(fa, fb);
  r.interior_value = std::numeric_limits<double>::infinity();
  r.has_interior_vertex = lo <= hi && lo <= m;
  r.interior = false;
  if (r.has_interior_vertex) {
    std::size_t arg_first = lo, arg_last = lo;
    for (std::size_t v = lo; v <= hi; ++v) {
      if (values_[v] < r.interior_value) {
        r.interior_value = values_[v];
        arg_first = arg_last = v;
      } else if (values_[v] == r.interior_value) {
        arg_last = v;
      }
    }
    r.first_grid = static_cast<std::uint32_t>(arg_first);
    r.last_grid = static_cast<std::uint32_t>(arg_last);
    r.value = std::min(r.value, r.interior_value);
    r.interior = r.interior_value < fa && r.interior_value < fb;
  }
  return r;
}

std::optional<std::uint32_t> Excursion::slide_to_valley(double x, int direction) const {
  const std::size_t m = grid_size();
  std::int64_t pos;
  const double xm = x * static_cast<double>(m);
  const double r = std::round(xm);
  if (r >= 0.0 && r <= static_cast<double>(m) &&
      static_cast<double>(static_cast<std::size_t>(r)) / static_cast<double>(m) == x) {
    pos = static_cast<std::int64_t>(r);
  } else {
    // Start at the first vertex in the slide direction.
    pos = static_cast<std::int64_t>(std::floor(xm)) + (direction > 0 ? 1 : 0);
  }
  if (pos < 0 || pos > static_cast<std::int64_t>(m)) return std::nullopt;
  while (pos + direction >= 0 && pos + direction <= static_cast<std::int64_t>(m) &&
         values_[static_cast<std::size_t>(pos + direction)] < values_[static_cast<std::size_t>(pos)])
    pos += direction;
  if (pos <= 0 || pos >= static_cast<std::int64_t>(m)) return std::nullopt;
  const auto p = static_cast<std::size_t>(pos);
  if (values_[p - 1] > values_[p] && values_[p] < values_[p + 1])
    return static_cast<std::uint32_t>(p);
  return std::nullopt;
}

SignedExcursion::SignedExcursion(Excursion f, std::vector<Sign> signs_on_minima)
    : f_(std::move(f)), minima_(f_.strict_local_minima()), signs_(std::move(signs_on_minima)) {
  if (signs_.size() != minima_.size())
    throw std::invalid_argument("SignedExcursion: one sign per strict local minimum required");
}

Sign SignedExcursion::sign_at(std::uint32_t grid_index) const {
  auto it = std::lower_bound(minima_.begin(), minima_.end(), grid_index);
  if (it == minima_.end() || *it != grid_index)
    throw std::invalid_argument("sign_at: index is not a strict local minimum");
  return signs_[static_cast<std::size_t>(it - minima_.begin())];
}

bool SignedExcursion::is_minimum(std::uint32_t grid_index) const {
  return std::binary_search(minima_.begin(), minima_.end(), grid_index);
}

Excursion sample_brownian_excursion(std::size_t m, Rng& rng) {
  if (m < 2) throw std::invalid_argument("sample_brownian_excursion: need m >= 2");
  // Gaussian bridge on m steps.
  std::vector<double> w(m + 1, 0.0);
  const double step_sd = std::sqrt(1.0 / static_cast<double>(m));
  for (std::size_t i = 1; i <= m; ++i) w[i] = w[i - 1] + step_sd * rng.gaussian();
  const double drift = w[m];
  for (std::size_t i = 0; i <= m; ++i)
    w[i] -= drift * static_cast<double>(i) / static_cast<double>(m);
  // Vervaat rotation at the (a.s. unique) argmin of the bridge.
  std::size_t imin = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (w[i] < w[imin]) imin = i;
  std::vector<double> e(m + 1);
  for (std::size_t j = 0; j <= m; ++j) e[j] = w[(imin + j) % m] - w[imin];
  e[0] = 0.0;
  e[m] = 0.0;
  return Excursion(std::move(e));
}

SignedExcursion assign_signs(Excursion f, Rng& rng) {
  const std::size_t k = f.strict_local_minima().size();
  std::vector<Sign> signs(k);
  for (auto& s : signs) s = rng.coin() ? Sign::plus : Sign::minus;
  return SignedExcursion(std::move(f), std::move(signs));
}

}  // namespace sepperm

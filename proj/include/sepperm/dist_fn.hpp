#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace sepperm {

/// Distribution function F on [0,1] with F(1) = 1: either the uniform law
/// or a right-continuous step function. quantile() is the pseudo-inverse
/// F*(u) = inf{x in [0,1] : F(x) >= u}.
class DistributionFunction {
 public:
  static DistributionFunction uniform() { return DistributionFunction(); }

  /// Step CDF with equal jumps 1/n at each of the given points.
  static DistributionFunction equal_step(std::vector<double> jump_points) {
    const std::size_t n = jump_points.size();
    std::vector<double> cum(n);
    for (std::size_t i = 0; i < n; ++i) cum[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return DistributionFunction(std::move(jump_points), std::move(cum));
  }

  /// Step CDF with explicit cumulative heights (nondecreasing, last == 1).
  DistributionFunction(std::vector<double> jump_points, std::vector<double> cumulative)
      : uniform_(false), jumps_(std::move(jump_points)), cum_(std::move(cumulative)) {
    if (jumps_.empty() || jumps_.size() != cum_.size())
      throw std::invalid_argument("DistributionFunction: bad step data");
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      if (jumps_[i] < 0.0 || jumps_[i] > 1.0 || (i > 0 && jumps_[i] <= jumps_[i - 1]))
        throw std::invalid_argument("DistributionFunction: jump points must increase in [0,1]");
      if (cum_[i] <= 0.0 || (i > 0 && cum_[i] < cum_[i - 1]))
        throw std::invalid_argument("DistributionFunction: cumulative heights must be nondecreasing");
    }
    if (cum_.back() != 1.0) throw std::invalid_argument("DistributionFunction: F(1) must be 1");
  }

  bool is_uniform() const { return uniform_; }
  const std::vector<double>& jump_points() const { return jumps_; }

  double value(double x) const {
    if (uniform_) return std::clamp(x, 0.0, 1.0);
    // Largest jump point <= x.
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
    if (it == jumps_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
  }

  double quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u > 1.0) throw std::invalid_argument("quantile: u must be in [0,1]");
    if (uniform_) return u;
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    return jumps_[static_cast<std::size_t>(it - cum_.begin())];
  }

 private:
  DistributionFunction() : uniform_(true) {}

  bool uniform_;
  std::vector<double> jumps_;
  std::vector<double> cum_;
};

}  // namespace sepperm

#include "fractime/grid.hpp"

#include <cmath>
#include <string>

#include "fractime/errors.hpp"

namespace fractime {

GridFunction::GridFunction(std::vector<double> abscissae, std::vector<double> values)
    : t_(std::move(abscissae)), f_(std::move(values)) {
  if (t_.size() != f_.size()) {
    detail::throw_domain("GridFunction", "abscissae and values differ in length");
  }
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || t_[i] < 0.0) {
      detail::throw_domain("GridFunction", "abscissa " + std::to_string(i) + " is negative or non-finite");
    }
    if (!std::isfinite(f_[i])) {
      detail::throw_domain("GridFunction", "value at t=" + std::to_string(t_[i]) + " is not finite");
    }
    if (i > 0 && !(t_[i] > t_[i - 1])) {
      detail::throw_domain("GridFunction", "abscissae are not strictly increasing");
    }
  }
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> f(f_);
  for (auto& v : f) v *= c;
  return {t_, std::move(f)};
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    detail::throw_domain("log_grid", "need 0 < lo < hi and at least two points");
  }
  std::vector<double> g(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

void require_increasing_positive(std::span<const double> grid, const char* where) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      detail::throw_domain(where, "grid point t=" + std::to_string(grid[i]) + " must be positive (t>0 required)");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      detail::throw_domain(where, "grid must be strictly increasing");
    }
  }
}

}  // namespace fractime

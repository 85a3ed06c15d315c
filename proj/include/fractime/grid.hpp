#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fractime {

/// Sampled function on strictly increasing, nonnegative abscissae.
class GridFunction {
 public:
  GridFunction() = default;
  /// Throws DomainError if lengths differ, abscissae are not strictly
  /// increasing, or any abscissa is negative or any entry non-finite.
  GridFunction(std::vector<double> abscissae, std::vector<double> values);

  [[nodiscard]] std::span<const double> abscissae() const { return t_; }
  [[nodiscard]] std::span<const double> values() const { return f_; }
  [[nodiscard]] std::size_t size() const { return t_.size(); }
  [[nodiscard]] bool empty() const { return t_.empty(); }

  [[nodiscard]] GridFunction scaled(double c) const;

 private:
  std::vector<double> t_;
  std::vector<double> f_;
};

/// `points` logarithmically spaced values from `lo` to `hi` inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Strictly increasing positive abscissae, else DomainError.
void require_increasing_positive(std::span<const double> grid, const char* where);

}  // namespace fractime

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fractime/models.hpp"

namespace fractime {

/// Counter-based Philox4x32-10 stream keyed by (seed, path index). Streams of
/// different paths are independent and do not depend on thread scheduling.
class PathRng {
 public:
  using result_type = std::uint64_t;

  PathRng(std::uint64_t seed, std::uint64_t path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard exponential.
  double exponential();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
};

struct McConfig {
  std::size_t n_paths = 100000;
  std::uint64_t seed = 12345;
  unsigned workers = 1;
  /// Jumps below this size are replaced by their mean drift (distributed order).
  double jump_cutoff = 1e-3;
  /// Path time step for grid-based first passage (two-stable model).
  double time_step = 1e-3;
  /// Hard cap on simulated steps or jumps per path.
  std::size_t max_steps_per_path = 50'000'000;

  /// n_paths >= 100, 0 < jump_cutoff < 1, time_step > 0; ConfigError otherwise.
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

/// One draw of S(t) for the alpha-stable subordinator, t^(1/alpha) S(1), by
/// the Kanter (Chambers-Mallows-Stuck) construction.
double sample_stable(double alpha, double t, PathRng& rng);

/// One draw of E(t) = (t / S(1))^alpha for the inverse alpha-stable subordinator.
double sample_inverse_stable(double alpha, double t, PathRng& rng);

/// Path simulator for subordinators with a Levy density (stable, two-stable,
/// distributed order). Stable components are simulated exactly on a time
/// grid; the distributed-order model is simulated as a compound Poisson
/// process of jumps >= jump_cutoff plus the compensating drift of the smaller
/// jumps, whose first passage is resolved exactly between jumps.
class PathSimulator {
 public:
  PathSimulator(const SubordinatorModel& model, const McConfig& cfg);
  ~PathSimulator();
  PathSimulator(PathSimulator&&) noexcept;
  PathSimulator& operator=(PathSimulator&&) noexcept;

  /// First-passage times E(t_i) for increasing levels along one simulated
  /// path. Grid-stepped models report the midpoint of the half-step bracket
  /// in which the path crosses (bias O(dt)).
  [[nodiscard]] std::vector<double> first_passages(std::span<const double> levels, PathRng& rng, double dt) const;

  /// One draw of S(t).
  [[nodiscard]] double sample_increment(double t, PathRng& rng) const;

  /// Small-jump drift and large-jump rate for the distributed-order model.
  [[nodiscard]] double drift() const;
  [[nodiscard]] double jump_rate() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Single first-passage time E(t); 0 for t = 0.
double first_passage(const SubordinatorModel& model, double t, PathRng& rng, double dt, const McConfig& cfg = {});

/// Monte Carlo estimate of u^E(t) = E[u(E(t))]. Deterministic in
/// (seed, n_paths) for any worker count. UnsupportedError for the c3 model
/// and user dynamics.
McEstimate estimate_ue(const SubordinatorModel& model, const Dynamic& dynamic, double t, const McConfig& cfg = {});

/// Monte Carlo estimate of E[exp(-lambda S(t))], to compare with exp(-t Phi(lambda)).
McEstimate estimate_laplace(const SubordinatorModel& model, double lambda, double t, const McConfig& cfg = {});

/// Mean and standard error of per-path values with pairwise summation.
McEstimate summarize(std::span<const double> values);

}  // namespace fractime

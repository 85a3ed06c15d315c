#include "fractime/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fractime/errors.hpp"
#include "fractime/parallel.hpp"

namespace fractime {

// ---------------------------------------------------------------------------
// Philox4x32-10
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)} {}

void PathRng::refill() {
  block_ = philox(counter_, key_);
  if (++counter_[0] == 0) ++counter_[1];
  used_ = 0;
}

PathRng::result_type PathRng::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t v = (static_cast<std::uint64_t>(block_[used_]) << 32) | block_[used_ + 1];
  used_ += 2;
  return v;
}

double PathRng::uniform() {
  // (k + 0.5) / 2^53 lies strictly inside (0, 1)
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::exponential() { return -std::log(uniform()); }

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

namespace {

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0)) detail::throw_domain(where, "alpha must lie in (0, 1)");
}

// S(1) with E exp(-l S(1)) = exp(-l^alpha): (A(U)/W)^((1-alpha)/alpha),
// A(u) = (sin(alpha u)/sin u)^(1/(1-alpha)) sin((1-alpha)u)/sin(alpha u).
double standard_stable(double alpha, PathRng& rng) {
  const double u = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double su = std::sin(u);
  const double a = std::pow(std::sin(alpha * u) / su, alpha / (1.0 - alpha)) * (std::sin((1.0 - alpha) * u) / su);
  return std::pow(a / w, (1.0 - alpha) / alpha);
}

}  // namespace

double sample_stable(double alpha, double t, PathRng& rng) {
  check_alpha(alpha, "sample_stable");
  if (!(t > 0.0)) detail::throw_domain("sample_stable", "t must be positive");
  return std::pow(t, 1.0 / alpha) * standard_stable(alpha, rng);
}

double sample_inverse_stable(double alpha, double t, PathRng& rng) {
  check_alpha(alpha, "sample_inverse_stable");
  if (!(t >= 0.0)) detail::throw_domain("sample_inverse_stable", "t must be >= 0");
  if (t == 0.0) return 0.0;
  return std::pow(t / standard_stable(alpha, rng), alpha);
}

void McConfig::validate() const {
  if (n_paths < 100) throw ConfigError("Monte Carlo needs at least 100 paths");
  if (!(jump_cutoff > 0.0 && jump_cutoff < 1.0)) throw ConfigError("jump cutoff must lie in (0, 1)");
  if (!(time_step > 0.0) || !std::isfinite(time_step)) throw ConfigError("time step must be positive");
  if (max_steps_per_path == 0) throw ConfigError("step cap must be positive");
}

// ---------------------------------------------------------------------------
// Path simulation
// ---------------------------------------------------------------------------

struct PathSimulator::Impl {
  SubordinatorModel model;
  McConfig cfg;
  // stable components (index, weight 1)
  std::vector<double> indices;
  // distributed order: compound Poisson with jumps >= eps
  double drift = 0.0;
  double rate = 0.0;
  std::vector<double> log_x;     // increasing
  std::vector<double> log_tail;  // log k(x), decreasing

  Impl(const SubordinatorModel& m, const McConfig& c) : model(m), cfg(c) {
    if (const auto* s = std::get_if<StableC1>(&m.spec())) {
      indices = {s->alpha};
    } else if (const auto* s2 = std::get_if<TwoStableC1>(&m.spec())) {
      indices = {s2->alpha, s2->beta};
    } else if (std::holds_alternative<DistributedOrderC2>(m.spec())) {
      build_jump_table();
    } else {
      throw UnsupportedError("Monte Carlo: the c3 model has no Levy density to simulate");
    }
  }

  void build_jump_table() {
    const double eps = cfg.jump_cutoff;
    rate = model.kernel_k(eps);                              // sigma((eps, inf))
    drift = model.kernel_integral(eps) - eps * rate;          // int_0^eps tau dsigma
    const double lo = std::log(eps);
    const double hi = std::log(1e300);
    for (double l = lo; l < hi; l += (l < lo + 30.0 ? 0.02 : 0.25)) {
      log_x.push_back(l);
      log_tail.push_back(std::log(model.kernel_k(std::exp(l))));
    }
    log_x.push_back(hi);
    log_tail.push_back(std::log(model.kernel_k(1e300)));
  }

  // Jump size with P(J > x) = k(x)/k(eps); +inf beyond the table.
  double jump(PathRng& rng) const {
    const double target = log_tail.front() + std::log(rng.uniform());
    if (target <= log_tail.back()) return std::numeric_limits<double>::infinity();
    // log_tail is decreasing: find first index with log_tail[i] <= target
    const auto it = std::lower_bound(log_tail.begin(), log_tail.end(), target, std::greater<>());
    const auto i = static_cast<std::size_t>(it - log_tail.begin());
    if (i == 0) return std::exp(log_x.front());
    const double f = (target - log_tail[i - 1]) / (log_tail[i] - log_tail[i - 1]);
    return std::exp(log_x[i - 1] + f * (log_x[i] - log_x[i - 1]));
  }

  double stable_increment(double dt, PathRng& rng) const {
    double s = 0.0;
    for (double a : indices) s += std::pow(dt, 1.0 / a) * standard_stable(a, rng);
    return s;
  }

  std::vector<double> passages_grid(std::span<const double> levels, PathRng& rng, double dt) const {
    std::vector<double> out(levels.size(), 0.0);
    const double half = 0.5 * dt;
    double s = 0.0;
    std::size_t k = 0;  // completed half steps
    std::size_t next = 0;
    while (next < levels.size() && levels[next] <= 0.0) out[next++] = 0.0;
    while (next < levels.size()) {
      if (k >= cfg.max_steps_per_path) {
        detail::throw_numerical("first_passage", "step cap reached before the path crossed t=" + std::to_string(levels[next]));
      }
      s += stable_increment(half, rng);
      ++k;
      while (next < levels.size() && s > levels[next]) {
        out[next++] = (static_cast<double>(k) - 0.5) * half;
      }
    }
    return out;
  }

  std::vector<double> passages_events(std::span<const double> levels, PathRng& rng) const {
    std::vector<double> out(levels.size(), 0.0);
    double s = 0.0;     // subordinator level
    double time = 0.0;  // operational time
    std::size_t next = 0;
    std::size_t events = 0;
    while (next < levels.size() && levels[next] <= 0.0) out[next++] = 0.0;
    while (next < levels.size()) {
      if (++events > cfg.max_steps_per_path) {
        detail::throw_numerical("first_passage", "jump cap reached before the path crossed t=" + std::to_string(levels[next]));
      }
      const double wait = rng.exponential() / rate;
      // linear drift until the next jump may already cross some levels
      while (next < levels.size() && drift > 0.0 && s + drift * wait > levels[next]) {
        out[next] = time + (levels[next] - s) / drift;
        ++next;
      }
      time += wait;
      s += drift * wait + jump(rng);
      while (next < levels.size() && s > levels[next]) out[next++] = time;
    }
    return out;
  }

  double increment(double t, PathRng& rng) const {
    if (!indices.empty()) return stable_increment(t, rng);
    double s = drift * t;
    double clock = rng.exponential() / rate;
    std::size_t events = 0;
    while (clock <= t) {
      if (++events > cfg.max_steps_per_path) detail::throw_numerical("sample_increment", "jump cap reached");
      s += jump(rng);
      clock += rng.exponential() / rate;
    }
    return s;
  }
};

PathSimulator::PathSimulator(const SubordinatorModel& model, const McConfig& cfg) {
  cfg.validate();
  impl_ = std::make_unique<Impl>(model, cfg);
}
PathSimulator::~PathSimulator() = default;
PathSimulator::PathSimulator(PathSimulator&&) noexcept = default;
PathSimulator& PathSimulator::operator=(PathSimulator&&) noexcept = default;

std::vector<double> PathSimulator::first_passages(std::span<const double> levels, PathRng& rng, double dt) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0) || (i > 0 && levels[i] < levels[i - 1])) {
      detail::throw_domain("first_passage", "levels must be nonnegative and nondecreasing");
    }
  }
  if (!impl_->indices.empty()) {
    if (!(dt > 0.0)) detail::throw_domain("first_passage", "time step must be positive");
    return impl_->passages_grid(levels, rng, dt);
  }
  return impl_->passages_events(levels, rng);
}

double PathSimulator::sample_increment(double t, PathRng& rng) const {
  if (!(t >= 0.0)) detail::throw_domain("sample_increment", "t must be >= 0");
  if (t == 0.0) return 0.0;
  return impl_->increment(t, rng);
}

double PathSimulator::drift() const { return impl_->drift; }
double PathSimulator::jump_rate() const { return impl_->rate; }

double first_passage(const SubordinatorModel& model, double t, PathRng& rng, double dt, const McConfig& cfg) {
  if (!(t >= 0.0)) detail::throw_domain("first_passage", "t must be >= 0");
  if (t == 0.0) return 0.0;
  const PathSimulator sim(model, cfg);
  const double level[1] = {t};
  return sim.first_passages(level, rng, dt)[0];
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

template <class PerPath>
McEstimate run_paths(const McConfig& cfg, PerPath&& per_path) {
  std::vector<double> values(cfg.n_paths);
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (cfg.n_paths + kBlock - 1) / kBlock;
  parallel_for(blocks, cfg.workers, [&](std::size_t b) {
    const std::size_t end = std::min(cfg.n_paths, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      PathRng rng(cfg.seed, i);
      values[i] = per_path(rng);
    }
  });
  return summarize(values);
}

}  // namespace

McEstimate summarize(std::span<const double> values) {
  if (values.empty()) detail::throw_domain("summarize", "no samples");
  const auto n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [mean](double x) { return (x - mean) * (x - mean); });
  const double var = values.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n), values.size()};
}

McEstimate estimate_ue(const SubordinatorModel& model, const Dynamic& dynamic, double t, const McConfig& cfg) {
  cfg.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) detail::throw_domain("estimate_ue", "t must be >= 0");
  if (std::holds_alternative<UserTransform>(dynamic.spec())) {
    throw UnsupportedError("estimate_ue: user transforms have no time-domain form");
  }
  if (std::holds_alternative<ParametricC3>(model.spec())) {
    throw UnsupportedError("estimate_ue: the c3 model has no Levy density to simulate");
  }
  if (const auto* s = std::get_if<StableC1>(&model.spec())) {
    const double alpha = s->alpha;
    return run_paths(cfg, [&](PathRng& rng) { return dynamic(sample_inverse_stable(alpha, t, rng)); });
  }
  const PathSimulator sim(model, cfg);
  const double level[1] = {t};
  return run_paths(cfg, [&](PathRng& rng) { return dynamic(sim.first_passages(level, rng, cfg.time_step)[0]); });
}

McEstimate estimate_laplace(const SubordinatorModel& model, double lambda, double t, const McConfig& cfg) {
  cfg.validate();
  if (!(lambda >= 0.0) || !(t >= 0.0)) detail::throw_domain("estimate_laplace", "lambda and t must be >= 0");
  const PathSimulator sim(model, cfg);
  return run_paths(cfg, [&](PathRng& rng) { return std::exp(-lambda * sim.sample_increment(t, rng)); });
}

}  // namespace fractime

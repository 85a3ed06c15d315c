#include "fractime/lt_invert.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fractime/errors.hpp"
#include "fractime/parallel.hpp"

namespace fractime {

namespace {

void require_time(double t, const char* where) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::throw_domain(where, "t must be positive (t>0 required)");
}

// Stehfest weights V_k for even N, accumulated in long double.
std::vector<long double> stehfest_weights(int n) {
  const int m = n / 2;
  auto fact = [](int k) {
    long double f = 1.0L;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::vector<long double> v(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    long double s = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, m); ++j) {
      s += std::pow(static_cast<long double>(j), m) * fact(2 * j) /
           (fact(m - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    v[static_cast<std::size_t>(k - 1)] = ((k + m) % 2 == 0) ? s : -s;
  }
  return v;
}

const std::vector<long double>& cached_weights(int n) {
  // n is even and <= 18 after validation
  static const auto table = [] {
    std::array<std::vector<long double>, 10> t;
    for (int i = 1; i <= 9; ++i) t[static_cast<std::size_t>(i)] = stehfest_weights(2 * i);
    return t;
  }();
  return table[static_cast<std::size_t>(n / 2)];
}

}  // namespace

void InversionConfig::validate() const {
  if (method == InversionMethod::Talbot) {
    if (terms < 16) throw ConfigError("Talbot inversion needs terms >= 16");
    if (!(talbot_shape > 0.0) || !std::isfinite(talbot_shape)) throw ConfigError("Talbot shape must be positive");
  } else {
    if (terms < 2 || terms % 2 != 0) throw ConfigError("Gaver-Stehfest needs an even number of terms");
    if (terms > 18) {
      throw ConfigError("Gaver-Stehfest weights overflow double precision beyond 18 terms");
    }
  }
}

double talbot_invert(const ComplexTransform& F, double t, const InversionConfig& cfg) {
  require_time(t, "talbot_invert");
  cfg.validate();
  const int m = cfg.terms;
  const double r = cfg.talbot_shape * m / t;
  // Contour l(theta) = r theta (cot theta + i), theta in (-pi, pi); the sum
  // uses the conjugate symmetry of real-valued inverses.
  const cplx f0 = F(cplx(r, 0.0));
  if (!std::isfinite(f0.real())) {
    detail::throw_numerical("talbot_invert", "non-finite transform value at t=" + std::to_string(t));
  }
  long double acc = 0.5L * std::exp(static_cast<long double>(r * t)) * f0.real();
  for (int k = 1; k < m; ++k) {
    const double theta = k * std::numbers::pi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const cplx delta = r * theta * cplx(cot, 1.0);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const cplx fv = F(delta);
    if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag())) {
      detail::throw_numerical("talbot_invert", "non-finite contour value at t=" + std::to_string(t));
    }
    acc += (std::exp(t * delta) * fv * cplx(1.0, sigma)).real();
  }
  const double out = static_cast<double>(acc) * r / m;
  if (!std::isfinite(out)) detail::throw_numerical("talbot_invert", "non-finite result at t=" + std::to_string(t));
  return out;
}

double gaver_stehfest_invert(const RealTransform& F, double t, const InversionConfig& cfg) {
  require_time(t, "gaver_stehfest_invert");
  cfg.validate();
  if (cfg.method != InversionMethod::GaverStehfest) throw ConfigError("gaver_stehfest_invert: config selects Talbot");
  const auto& w = cached_weights(cfg.terms);
  const double ln2t = std::numbers::ln2 / t;
  long double acc = 0.0L;
  for (int k = 1; k <= cfg.terms; ++k) {
    const double fv = F(k * ln2t);
    if (!std::isfinite(fv)) {
      detail::throw_numerical("gaver_stehfest_invert", "non-finite transform value at t=" + std::to_string(t));
    }
    acc += w[static_cast<std::size_t>(k - 1)] * fv;
  }
  return static_cast<double>(acc * ln2t);
}

double invert(const ComplexTransform& F, double t, const InversionConfig& cfg) {
  if (cfg.method == InversionMethod::Talbot) return talbot_invert(F, t, cfg);
  return gaver_stehfest_invert([&F](double l) { return F(cplx(l, 0.0)).real(); }, t, cfg);
}

GridFunction invert_on_grid(const ComplexTransform& F, std::span<const double> grid, const InversionConfig& cfg,
                            unsigned workers) {
  require_increasing_positive(grid, "invert_on_grid");
  cfg.validate();
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    try {
      values[i] = invert(F, grid[i], cfg);
    } catch (const NumericalError& e) {
      throw NumericalError("invert_on_grid: failure at t=" + std::to_string(grid[i]) + ": " + e.what());
    }
  });
  return {std::vector<double>(grid.begin(), grid.end()), std::move(values)};
}

}  // namespace fractime

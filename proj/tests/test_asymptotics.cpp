#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fractime/asymptotics.hpp"
#include "fractime/errors.hpp"
#include "fractime/grid.hpp"
#include "fractime/models.hpp"
#include "fractime/subordinate.hpp"
#include "oracles.hpp"

using namespace fractime;

namespace {

GridFunction synthetic(double lo, double hi, std::size_t n, double c, double p, double q) {
  auto t = log_grid(lo, hi, n);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = c * std::pow(t[i], p) * std::pow(std::log(t[i]), q);
  return {std::move(t), std::move(v)};
}

GridFunction sampled(const std::vector<double>& grid, double (*f)(double)) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return {grid, std::move(v)};
}

// int_0^a E_{1/2}(-sqrt s) ds = a E_{1/2,2}(-sqrt a), summed directly for a <= 1
double exp_head(double a) {
  double s = 0.0;
  for (int k = 0; k < 60; ++k) s += std::pow(-std::sqrt(a), k) * a / std::tgamma(0.5 * k + 2.0);
  return s;
}

}  // namespace

TEST_CASE("fit_rate examples") {
  const auto a = fit_rate(synthetic(10.0, 1e8, 25, 3.0, 0.5, 0.0));
  CHECK(std::abs(a.p - 0.5) <= 1e-9);
  CHECK(std::abs(a.q) <= 1e-9);
  CHECK(std::abs(a.log_C - std::log(3.0)) <= 1e-8);
  CHECK(a.rms_residual <= 1e-12);
  CHECK(a.t_min == doctest::Approx(10.0));
  CHECK(a.t_max == doctest::Approx(1e8));
  const auto b = fit_rate(synthetic(10.0, 1e8, 25, 2.0, 0.0, -1.0));
  CHECK(std::abs(b.q + 1.0) <= 1e-9);
  CHECK(std::abs(b.p) <= 1e-9);
}

TEST_CASE("fit_rate recovers planted exponents") {
  for (double p : {-0.7, 0.0, 0.3, 1.5}) {
    for (double q : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
      const auto f = fit_rate(synthetic(1e2, 1e9, 30, 0.7, p, q));
      INFO("p=" << p << " q=" << q);
      CHECK(std::abs(f.p - p) <= 1e-6);
      CHECK(std::abs(f.q - q) <= 1e-6);
      // constrained fits are exact when the pinned exponent is zero
      if (p == 0.0) CHECK(std::abs(fit_rate(synthetic(1e2, 1e9, 30, 0.7, p, q), FitMode::PinP0).q - q) <= 1e-6);
      if (q == 0.0) CHECK(std::abs(fit_rate(synthetic(1e2, 1e9, 30, 0.7, p, q), FitMode::PinQ0).p - p) <= 1e-6);
    }
  }
}

TEST_CASE("fit_rate is scale equivariant") {
  const auto base = synthetic(10.0, 1e10, 40, 1.0, 0.37, -1.3);
  const auto f0 = fit_rate(base);
  for (double c : {1e-8, 0.5, 7.0, 1e12}) {
    const auto f = fit_rate(base.scaled(c));
    CHECK(std::abs(f.p - f0.p) <= 1e-9);
    CHECK(std::abs(f.q - f0.q) <= 1e-9);
    CHECK(std::abs(f.log_C - f0.log_C - std::log(c)) <= 1e-8);
  }
}

TEST_CASE("fit_rate preconditions") {
  CHECK_THROWS_AS(fit_rate(synthetic(10.0, 1e8, 7, 1.0, 0.5, 0.0)), DomainError);
  CHECK_THROWS_AS(fit_rate(synthetic(10.0, 1e3, 25, 1.0, 0.5, 0.0)), DomainError);
  CHECK_THROWS_AS(fit_rate(synthetic(5.0, 1e8, 25, 1.0, 0.5, 0.0)), DomainError);
  CHECK_THROWS_AS(fit_rate(synthetic(10.0, 1e8, 25, -1.0, 0.5, 0.0)), DomainError);
  auto t = log_grid(10.0, 1e8, 25);
  std::vector<double> v(t.size(), 1.0);
  v[3] = 0.0;
  CHECK_THROWS_AS(fit_rate(GridFunction(t, v)), DomainError);
}

TEST_CASE("stabilized variation") {
  CHECK(stabilized_variation(synthetic(1e4, 1e12, 25, 4.0, 0.0, -1.0), -1.0) <= 1e-12);
  const double v = stabilized_variation(synthetic(1e4, 1e12, 25, 4.0, 0.0, -1.0), -2.0);
  // (log t) varies by log(1e12)/log(1e11) - 1 over the top decade
  CHECK(v == doctest::Approx(std::log(1e12) / std::log(1e11) - 1.0).epsilon(1e-9));
}

TEST_CASE("cesaro_mean examples") {
  for (const auto& m : {SubordinatorModel::stable(0.5), SubordinatorModel::distributed_order(),
                        SubordinatorModel::parametric_c3(1.0)}) {
    CHECK(cesaro_mean(m, Dynamic::monomial(0), 3.0) == 1.0);
  }
  const auto st = SubordinatorModel::stable(0.5);
  CHECK(cesaro_mean(st, Dynamic::monomial(1), 9.0) == doctest::Approx(4.0 / std::sqrt(std::numbers::pi)).epsilon(1e-10));
  // M_t of t^(alpha n) closed form for other exponents
  for (double t : {0.5, 30.0, 1e6}) {
    const double expected = oracle::stable_moment(0.5, 2, t) / 2.0;
    CHECK(cesaro_mean(st, Dynamic::monomial(2), t) == doctest::Approx(expected).epsilon(1e-10));
  }
  const auto c = cesaro_curve(st, Dynamic::exponential(1.0), log_grid(1e2, 1e8, 25), {}, 4);
  const auto f = fit_rate(c, FitMode::PinQ0);
  CHECK(std::abs(f.p + 0.5) <= 0.03);
  CHECK_THROWS_AS(cesaro_mean(st, Dynamic::monomial(1), 0.0), DomainError);
}

TEST_CASE("cesaro_mean agrees with a trapezoid average of u^E") {
  const auto st = SubordinatorModel::stable(0.5);
  for (double t : {10.0, 100.0}) {
    const double a = t / 100.0;
    for (const auto& d : {Dynamic::monomial(1), Dynamic::exponential(1.0)}) {
      // trapezoid in x = log s over [a, t]
      const int n = 400;
      const double h = std::log(t / a) / n;
      double body = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double s = a * std::exp(i * h);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        body += w * ue_eval(st, d, s) * s * h;
      }
      const bool mono = std::holds_alternative<Monomial>(d.spec());
      const double head = mono ? (2.0 / std::sqrt(std::numbers::pi)) * std::pow(a, 1.5) / 1.5 : exp_head(a);
      const double expected = (head + body) / t;
      INFO(d.describe() << " t=" << t);
      CHECK(std::abs(cesaro_mean(st, d, t) - expected) <= 1e-3 * expected);
    }
  }
}

TEST_CASE("Cesaro and direct exponents coincide for the stable class") {
  const auto st = SubordinatorModel::stable(0.5);
  const auto grid = default_verification_grid(st);
  CHECK(grid.size() == 25);
  CHECK(grid.front() == doctest::Approx(1e2));
  CHECK(grid.back() == doctest::Approx(1e8));
  for (const auto& d : {Dynamic::monomial(1), Dynamic::monomial(2), Dynamic::exponential(1.0)}) {
    std::vector<double> direct(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) direct[i] = ue_eval(st, d, grid[i]);
    const auto pd = fit_rate(GridFunction(grid, direct), FitMode::PinQ0).p;
    const auto pc = fit_rate(cesaro_curve(st, d, grid), FitMode::PinQ0).p;
    INFO(d.describe() << " direct " << pd << " cesaro " << pc);
    CHECK(std::abs(pd - pc) <= 0.02);
  }
}

TEST_CASE("verify_class examples") {
  const auto st = SubordinatorModel::stable(0.5);
  const auto r1 = verify_class(st, Dynamic::monomial(1), default_verification_grid(st), {}, 0.03, 0.15);
  CHECK(r1.passed);
  CHECK(r1.p.gated);
  CHECK(std::abs(r1.p.measured - 0.5) <= 0.03);
  CHECK(r1.constrained_fit.mode == FitMode::PinQ0);
  CHECK(r1.free_fit.mode == FitMode::Free);
  CHECK(r1.cesaro.size() == 25);

  const auto c2 = SubordinatorModel::distributed_order();
  const auto g2 = default_verification_grid(c2);
  CHECK(g2.front() == doctest::Approx(1e4));
  CHECK(g2.back() == doctest::Approx(1e12));
  const auto r2 = verify_class(c2, Dynamic::monomial(1), g2, {}, 0.05, 0.15);
  CHECK(r2.passed);
  CHECK(r2.q.gated);
  CHECK(std::abs(r2.q.measured - 1.0) <= 0.15);
  CHECK(r2.constrained_fit.mode == FitMode::PinP0);

  const auto c3 = SubordinatorModel::parametric_c3(1.0);
  const auto r3 = verify_class(c3, Dynamic::exponential(1.0), default_verification_grid(c3), {}, 0.05, 0.2);
  CHECK(r3.passed);
  CHECK(std::abs(r3.q.measured + 2.0) <= 0.2);
  CHECK(r3.prediction.q == -2.0);

  // a tolerance that cannot be met is reported, not hidden
  const auto tight = verify_class(c2, Dynamic::exponential(1.0), g2, {}, 0.05, 1e-6);
  CHECK_FALSE(tight.passed);
  CHECK_FALSE(tight.q.pass);
  CHECK(tight.q.deviation > 1e-6);
}

TEST_CASE("fit mode names") {
  CHECK(to_string(FitMode::Free) == "free");
  CHECK(to_string(FitMode::PinP0) == "p=0");
  CHECK(to_string(FitMode::PinQ0) == "q=0");
}

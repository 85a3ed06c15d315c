#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fractime/errors.hpp"
#include "fractime/gfde.hpp"
#include "fractime/models.hpp"
#include "fractime/subordinate.hpp"
#include "oracles.hpp"

using namespace fractime;

namespace {

RelaxationProblem stable_problem(double h, double horizon = 5.0) {
  RelaxationProblem p{SubordinatorModel::stable(0.5)};
  p.h = h;
  p.horizon = horizon;
  return p;
}

double max_error_half(const GridFunction& sol) {
  double err = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    err = std::max(err, std::abs(sol.values()[i] - oracle::ml_half_erfc(std::sqrt(sol.abscissae()[i]))));
  }
  return err;
}

double value_at(const GridFunction& sol, double t) {
  const auto ts = sol.abscissae();
  const auto it = std::lower_bound(ts.begin(), ts.end(), t - 1e-12);
  REQUIRE(it != ts.end());
  REQUIRE(std::abs(*it - t) <= 1e-9);
  return sol.values()[static_cast<std::size_t>(it - ts.begin())];
}

}  // namespace

TEST_CASE("trivial right sides") {
  for (const auto& m : {SubordinatorModel::stable(0.5), SubordinatorModel::two_stable(0.4, 0.8),
                        SubordinatorModel::distributed_order()}) {
    RelaxationProblem p{m};
    p.a = 0.0;
    p.u0 = 2.5;
    p.h = 1e-2;
    p.horizon = 1.0;
    const auto sol = solve_relaxation(p);
    CHECK(sol.abscissae().front() == 0.0);
    CHECK(sol.abscissae().back() == doctest::Approx(1.0).epsilon(1e-14));
    for (double v : sol.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(residual_check(sol, p) <= 1e-12);

    p.a = 1.0;
    p.u0 = 0.0;
    const auto zero = solve_relaxation(p);
    for (double v : zero.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("stable relaxation reproduces the Mittag-Leffler function") {
  const auto p = stable_problem(1e-3);
  const auto sol = solve_relaxation(p);
  CHECK(std::abs(value_at(sol, 1.0) - 0.4275835761558) <= 1e-3);
  CHECK(max_error_half(sol) <= 1e-3);
  CHECK(residual_check(sol, p) <= 1e-6);
  // positive and nonincreasing
  for (std::size_t i = 1; i < sol.size(); ++i) {
    CHECK(sol.values()[i] > 0.0);
    CHECK(sol.values()[i] <= sol.values()[i - 1]);
  }
  const auto uni = uniform_samples(sol, 1e-3);
  CHECK(uni.size() == 5001);
  CHECK(uni.abscissae()[1000] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(uni.values()[1000] == value_at(sol, 1.0));
}

TEST_CASE("first-order convergence under step halving") {
  const double e2 = max_error_half(solve_relaxation(stable_problem(2e-3)));
  const double e1 = max_error_half(solve_relaxation(stable_problem(1e-3)));
  const double ratio = e2 / e1;
  INFO("errors " << e2 << " " << e1);
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.3);
}

TEST_CASE("distributed-order relaxation matches the subordinated exponential") {
  RelaxationProblem p{SubordinatorModel::distributed_order()};
  p.h = 1e-3;
  const auto sol = solve_relaxation(p);
  const auto uni = uniform_samples(sol, 1e-2);
  double err = 0.0;
  for (std::size_t i = 1; i < uni.size(); ++i) {
    const double t = uni.abscissae()[i];
    err = std::max(err, std::abs(uni.values()[i] - ue_eval(p.model, Dynamic::exponential(1.0), t)));
  }
  CHECK(err <= 2e-3);
  CHECK(residual_check(sol, p) <= 1e-6);
  for (std::size_t i = 1; i < sol.size(); ++i) {
    CHECK(sol.values()[i] > 0.0);
    CHECK(sol.values()[i] <= sol.values()[i - 1]);
  }
}

TEST_CASE("two-stable relaxation matches the subordinated exponential") {
  RelaxationProblem p{SubordinatorModel::two_stable(0.5, 0.75)};
  p.h = 2e-3;
  p.horizon = 2.0;
  const auto uni = uniform_samples(solve_relaxation(p), 1e-1);
  for (std::size_t i = 1; i < uni.size(); ++i) {
    const double t = uni.abscissae()[i];
    CHECK(std::abs(uni.values()[i] - ue_eval(p.model, Dynamic::exponential(1.0), t)) <= 3e-3);
  }
}

TEST_CASE("relaxation errors") {
  CHECK_THROWS_AS(solve_relaxation(RelaxationProblem{SubordinatorModel::parametric_c3(1.0)}), UnsupportedError);
  auto p = stable_problem(1e-2, 1.0);
  p.h = 2.0;
  CHECK_THROWS_AS(solve_relaxation(p), DomainError);
  p.h = 0.0;
  CHECK_THROWS_AS(solve_relaxation(p), DomainError);
  p = stable_problem(1e-2, 1.0);
  p.a = -1.0;
  CHECK_THROWS_AS(solve_relaxation(p), DomainError);
  // a solution of a different problem does not fit the mesh
  const auto sol = solve_relaxation(stable_problem(1e-2, 1.0));
  CHECK_THROWS_AS(residual_check(sol, stable_problem(1e-2, 2.0)), DomainError);
  CHECK_THROWS_AS(residual_check(GridFunction({0.0, 0.5, 1.0}, {0.5, 0.4, 0.3}), stable_problem(1e-2, 1.0)), DomainError);
}

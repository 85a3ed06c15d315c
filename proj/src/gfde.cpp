#include "fractime/gfde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fractime/errors.hpp"

namespace fractime {

namespace {

// Cubic Hermite table of int_0^x k in the variable log x; used when the
// kernel integral has no closed form (distributed order).
class LogHermiteTable {
 public:
  LogHermiteTable(const SubordinatorModel& model, double x_min, double x_max) : model_(model) {
    lo_ = std::log(x_min);
    const double hi = std::log(x_max) + step_;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo_) / step_)) + 1;
    f_.resize(n);
    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::exp(lo_ + step_ * static_cast<double>(i));
      f_[i] = model.kernel_integral(x);
      d_[i] = x * model.kernel_k(x);  // d/dlog x of int_0^x k
    }
  }

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    const double pos = (std::log(x) - lo_) / step_;
    if (pos < 0.0 || pos >= static_cast<double>(f_.size() - 1)) return model_.kernel_integral(x);
    const auto i = static_cast<std::size_t>(pos);
    const double s = pos - static_cast<double>(i);
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f_[i] + (s3 - 2 * s2 + s) * step_ * d_[i] + (-2 * s3 + 3 * s2) * f_[i + 1] +
           (s3 - s2) * step_ * d_[i + 1];
  }

 private:
  const SubordinatorModel& model_;
  double step_ = 0.01;
  double lo_ = 0.0;
  std::vector<double> f_;
  std::vector<double> d_;
};

void validate(const RelaxationProblem& p) {
  if (!p.model.has_kernel()) throw UnsupportedError("solve_relaxation: the c3 model defines no kernel k");
  if (!(p.h > 0.0) || !(p.horizon > 0.0) || !std::isfinite(p.horizon)) {
    detail::throw_domain("solve_relaxation", "need h > 0 and T > 0");
  }
  if (p.h > p.horizon) detail::throw_domain("solve_relaxation", "step h exceeds the horizon T");
  if (!(p.a >= 0.0) || !std::isfinite(p.a)) detail::throw_domain("solve_relaxation", "rate a must be >= 0");
  if (!std::isfinite(p.u0)) detail::throw_domain("solve_relaxation", "u0 must be finite");
  if (!(p.grading_horizon >= 0.0)) detail::throw_domain("solve_relaxation", "grading horizon must be >= 0");
  if (p.horizon / p.h > 5e5) detail::throw_domain("solve_relaxation", "too many steps (T/h > 5e5)");
}

std::vector<double> build_mesh(const RelaxationProblem& p) {
  const auto steps = static_cast<std::size_t>(std::floor(p.horizon / p.h * (1.0 + 1e-12)));
  std::vector<double> mesh{0.0};
  const double tg = std::min(p.grading_horizon, p.horizon);
  if (tg > p.h) {
    const double ratio = p.h / tg;
    for (double t = 1e-6 * p.h; t < tg; t += std::min(p.h, t * ratio)) mesh.push_back(t);
  }
  for (std::size_t m = 1; m <= steps; ++m) mesh.push_back(static_cast<double>(m) * p.h);
  if (p.horizon - mesh.back() > 1e-9 * p.horizon) mesh.push_back(p.horizon);
  std::sort(mesh.begin(), mesh.end());
  // merge graded points that crowd a uniform point
  std::vector<double> out{0.0};
  for (std::size_t i = 1; i < mesh.size(); ++i) {
    const double t = mesh[i];
    const bool uniform = std::abs(t / p.h - std::round(t / p.h)) < 1e-9 || t == p.horizon;
    if (t - out.back() < 1e-3 * std::min(p.h, t * p.h / std::max(tg, p.h))) {
      if (uniform) out.back() = t;
      continue;
    }
    out.push_back(t);
  }
  return out;
}

std::function<double(double)> kernel_integral_fn(const SubordinatorModel& model, double x_min, double x_max) {
  if (std::holds_alternative<DistributedOrderC2>(model.spec())) {
    auto table = std::make_shared<LogHermiteTable>(model, x_min, x_max);
    return [table](double x) { return (*table)(x); };
  }
  return [&model](double x) { return x > 0.0 ? model.kernel_integral(x) : 0.0; };
}

// Row m of the discrete equation: sum_j (w_mj + a dt_j) u_j - u0 KI(t_m).
template <class KI>
double row_defect(const std::vector<double>& t, const std::vector<double>& u, std::size_t m, double a, double u0,
                  const KI& ki, double& diag) {
  double acc = 0.0;
  double prev = ki(t[m] - t[0]);
  for (std::size_t j = 1; j <= m; ++j) {
    const double cur = ki(t[m] - t[j]);
    const double w = prev - cur + a * (t[j] - t[j - 1]);
    prev = cur;
    if (j == m) {
      diag = w;
    } else {
      acc += w * u[j];
    }
  }
  return acc - u0 * ki(t[m]);
}

}  // namespace

GridFunction solve_relaxation(const RelaxationProblem& problem) {
  validate(problem);
  const std::vector<double> t = build_mesh(problem);
  double min_gap = problem.h;
  for (std::size_t i = 1; i < t.size(); ++i) min_gap = std::min(min_gap, t[i] - t[i - 1]);
  const auto ki = kernel_integral_fn(problem.model, 0.5 * min_gap, problem.horizon);
  std::vector<double> u(t.size(), 0.0);
  u[0] = problem.u0;
  for (std::size_t m = 1; m < t.size(); ++m) {
    double diag = 0.0;
    const double rest = row_defect(t, u, m, problem.a, problem.u0, ki, diag);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      detail::throw_numerical("solve_relaxation", "singular step at t=" + std::to_string(t[m]));
    }
    u[m] = -rest / diag;
  }
  return {t, std::move(u)};
}

double residual_check(const GridFunction& solution, const RelaxationProblem& problem) {
  validate(problem);
  const auto ts = solution.abscissae();
  const auto us = solution.values();
  if (ts.size() < 2 || ts.front() != 0.0 || us.front() != problem.u0 ||
      std::abs(ts.back() - problem.horizon) > 1e-9 * problem.horizon) {
    detail::throw_domain("residual_check", "solution mesh does not match the problem (must span [0, T] from u0)");
  }
  const std::vector<double> t(ts.begin(), ts.end());
  const std::vector<double> u(us.begin(), us.end());
  double min_gap = problem.h;
  for (std::size_t i = 1; i < t.size(); ++i) min_gap = std::min(min_gap, t[i] - t[i - 1]);
  const auto ki = kernel_integral_fn(problem.model, 0.5 * min_gap, problem.horizon);
  double worst = 0.0;
  for (std::size_t m = 1; m < t.size(); ++m) {
    double diag = 0.0;
    const double rest = row_defect(t, u, m, problem.a, problem.u0, ki, diag);
    worst = std::max(worst, std::abs(rest + diag * u[m]));
  }
  return worst;
}

GridFunction uniform_samples(const GridFunction& solution, double h) {
  std::vector<double> t;
  std::vector<double> v;
  const auto ts = solution.abscissae();
  const auto vs = solution.values();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] / h - std::round(ts[i] / h)) < 1e-9 || i + 1 == ts.size()) {
      t.push_back(ts[i]);
      v.push_back(vs[i]);
    }
  }
  return {std::move(t), std::move(v)};
}

}  // namespace fractime

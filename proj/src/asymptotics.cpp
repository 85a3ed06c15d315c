#include "fractime/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fractime/errors.hpp"
#include "fractime/parallel.hpp"
#include "fractime/subordinate.hpp"

namespace fractime {

namespace {

bool is_constant_dynamic(const Dynamic& dynamic) {
  const auto* m = std::get_if<Monomial>(&dynamic.spec());
  return m != nullptr && m->n == 0;
}

}  // namespace

double cesaro_mean(const SubordinatorModel& model, const Dynamic& dynamic, double t, const InversionConfig& cfg) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::throw_domain("cesaro_mean", "t must be positive (t>0 required)");
  cfg.validate();
  if (is_constant_dynamic(dynamic)) return 1.0;
  const ComplexTransform F = [&](cplx lambda) { return ue_transform_continued(model, dynamic, lambda) / lambda; };
  return invert(F, t, cfg) / t;
}

GridFunction cesaro_curve(const SubordinatorModel& model, const Dynamic& dynamic, std::span<const double> grid,
                          const InversionConfig& cfg, unsigned workers) {
  require_increasing_positive(grid, "cesaro_curve");
  cfg.validate();
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { values[i] = cesaro_mean(model, dynamic, grid[i], cfg); });
  return GridFunction(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

AsymptoticFit fit_rate(const GridFunction& samples, FitMode mode) {
  const auto t = samples.abscissae();
  const auto f = samples.values();
  const std::size_t n = samples.size();
  if (n < 8) detail::throw_domain("fit_rate", "at least 8 samples are required");
  if (t.front() < 10.0) detail::throw_domain("fit_rate", "abscissae must be >= 10");
  if (t.back() < 1e4 * t.front() * (1.0 - 1e-12)) {
    detail::throw_domain("fit_rate", "abscissae must span at least 4 decades");
  }
  for (double v : f) {
    if (!(v > 0.0)) detail::throw_domain("fit_rate", "values must be positive");
  }

  const bool use_p = mode != FitMode::PinP0;
  const bool use_q = mode != FitMode::PinQ0;
  const int cols = 1 + (use_p ? 1 : 0) + (use_q ? 1 : 0);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), cols);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double lt = std::log(t[i]);
    int c = 0;
    A(r, c++) = 1.0;
    if (use_p) A(r, c++) = lt;
    if (use_q) A(r, c++) = std::log(lt);
    b(r) = std::log(f[i]);
  }
  // Column scaling keeps the rank decision independent of the magnitude of log t.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < cols; ++c) A.col(c) /= scale(c);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) detail::throw_numerical("fit_rate", "rank-deficient design (log t and log log t are collinear)");
  Eigen::VectorXd x = qr.solve(b);
  for (int c = 0; c < cols; ++c) x(c) /= scale(c);

  AsymptoticFit fit;
  fit.mode = mode;
  int c = 0;
  fit.log_C = x(c++);
  fit.p = use_p ? x(c++) : 0.0;
  fit.q = use_q ? x(c++) : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lt = std::log(t[i]);
    const double r = std::log(f[i]) - (fit.log_C + fit.p * lt + fit.q * std::log(lt));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  fit.t_min = t.front();
  fit.t_max = t.back();
  return fit;
}

double stabilized_variation(const GridFunction& samples, double q) {
  const auto t = samples.abscissae();
  const auto f = samples.values();
  if (samples.empty()) detail::throw_domain("stabilized_variation", "no samples");
  const double lo = t.back() / 10.0 * (1.0 - 1e-12);
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (t[i] < lo) continue;
    if (!(t[i] > 1.0)) detail::throw_domain("stabilized_variation", "abscissae must exceed 1");
    const double r = f[i] / std::pow(std::log(t[i]), q);
    mn = std::min(mn, r);
    mx = std::max(mx, r);
  }
  if (!(mn > 0.0)) detail::throw_domain("stabilized_variation", "values must be positive");
  return mx / mn - 1.0;
}

VerificationReport verify_class(const SubordinatorModel& model, const Dynamic& dynamic, std::span<const double> grid,
                                const InversionConfig& cfg, double tol_p, double tol_q, unsigned workers) {
  if (!(tol_p > 0.0) || !(tol_q > 0.0)) detail::throw_domain("verify_class", "tolerances must be positive");
  VerificationReport report;
  report.model = model.describe();
  report.dynamic = dynamic.describe();
  report.prediction = predicted_exponents(model, dynamic);
  report.cesaro = cesaro_curve(model, dynamic, grid, cfg, workers);
  report.free_fit = fit_rate(report.cesaro, FitMode::Free);
  const bool c1 = model.kernel_class() == KernelClass::C1;
  report.constrained_fit = fit_rate(report.cesaro, c1 ? FitMode::PinQ0 : FitMode::PinP0);

  auto check = [](double measured, double predicted, double tol, bool gated) {
    ExponentCheck e;
    e.measured = measured;
    e.predicted = predicted;
    e.deviation = std::abs(measured - predicted);
    e.tolerance = tol;
    e.gated = gated;
    e.pass = e.deviation <= tol;
    return e;
  };
  if (c1) {
    report.p = check(report.constrained_fit.p, report.prediction.p, tol_p, true);
    report.q = check(report.free_fit.q, report.prediction.q, tol_q, false);
  } else {
    report.p = check(report.free_fit.p, report.prediction.p, tol_p, false);
    report.q = check(report.constrained_fit.q, report.prediction.q, tol_q, true);
  }
  report.passed = (!report.p.gated || report.p.pass) && (!report.q.gated || report.q.pass);
  return report;
}

std::vector<double> default_verification_grid(const SubordinatorModel& model) {
  if (model.kernel_class() == KernelClass::C1) return log_grid(1e2, 1e8, 25);
  return log_grid(1e4, 1e12, 25);
}

std::string to_string(FitMode mode) {
  switch (mode) {
    case FitMode::Free:
      return "free";
    case FitMode::PinP0:
      return "p=0";
    case FitMode::PinQ0:
      return "q=0";
  }
  return "free";
}

}  // namespace fractime

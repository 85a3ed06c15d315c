#include "fractime/subordinate.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "detail/quad.hpp"
#include "fractime/errors.hpp"
#include "fractime/parallel.hpp"
#include "fractime/special.hpp"

namespace fractime {

namespace {

cplx transform_body(const SubordinatorModel& model, const Dynamic& dynamic, cplx lambda) {
  cplx out;
  if (const auto* m = std::get_if<Monomial>(&dynamic.spec())) {
    if (m->n == 0) return 1.0 / lambda;
    const double fact = std::tgamma(m->n + 1.0);
    out = fact / (lambda * std::pow(model.phi_continued(lambda), m->n));
  } else if (const auto* e = std::get_if<Exponential>(&dynamic.spec())) {
    const cplx k = model.kappa_continued(lambda);
    out = k / (e->a + lambda * k);
  } else {
    const auto& u = std::get<UserTransform>(dynamic.spec());
    const cplx k = model.kappa_continued(lambda);
    out = k * u.transform(lambda * k);
  }
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
    detail::throw_numerical("ue_transform", "transform overflowed or is not finite");
  }
  return out;
}

double require_stable_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0)) detail::throw_domain(where, "alpha must lie in (0, 1)");
  return alpha;
}

}  // namespace

cplx ue_transform(const SubordinatorModel& model, const Dynamic& dynamic, cplx lambda) {
  if (!(lambda.real() > 0.0) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    detail::throw_domain("ue_transform", "requires Re(lambda) > 0");
  }
  return transform_body(model, dynamic, lambda);
}

cplx ue_transform_continued(const SubordinatorModel& model, const Dynamic& dynamic, cplx lambda) {
  return transform_body(model, dynamic, lambda);
}

double ue_eval(const SubordinatorModel& model, const Dynamic& dynamic, double t, const InversionConfig& cfg) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::throw_domain("ue_eval", "t must be positive");
  if (std::holds_alternative<Monomial>(dynamic.spec()) && std::get<Monomial>(dynamic.spec()).n == 0) return 1.0;
  return invert([&](cplx l) { return transform_body(model, dynamic, l); }, t, cfg);
}

double ue_closed_form_stable(double alpha, const Dynamic& dynamic, double t) {
  require_stable_alpha(alpha, "ue_closed_form_stable");
  if (!(t >= 0.0) || !std::isfinite(t)) detail::throw_domain("ue_closed_form_stable", "t must be >= 0");
  if (const auto* m = std::get_if<Monomial>(&dynamic.spec())) {
    if (m->n == 0) return 1.0;
    const double an = alpha * m->n;
    return std::exp(std::lgamma(m->n + 1.0) - std::lgamma(an + 1.0)) * std::pow(t, an);
  }
  if (const auto* e = std::get_if<Exponential>(&dynamic.spec())) {
    return mittag_leffler(alpha, e->a * std::pow(t, alpha));
  }
  throw UnsupportedError("ue_closed_form_stable: only monomial and exponential dynamics have closed forms");
}

double ue_quadrature_stable(double alpha, const Dynamic& dynamic, double t, double rel_tol) {
  require_stable_alpha(alpha, "ue_quadrature_stable");
  if (!(t > 0.0) || !std::isfinite(t)) detail::throw_domain("ue_quadrature_stable", "t must be positive");
  if (!(rel_tol > 0.0)) detail::throw_domain("ue_quadrature_stable", "rel_tol must be positive");
  if (std::holds_alternative<UserTransform>(dynamic.spec())) {
    throw UnsupportedError("ue_quadrature_stable: user transforms have no time-domain form");
  }
  // G_t(tau) = t^-alpha G_1(tau t^-alpha); integrate in x = tau t^-alpha.
  const double scale = std::pow(t, alpha);
  auto f = [&](double x) { return dynamic(scale * x) * density_G_stable(alpha, 1.0, x); };
  const double inner_tol = std::min(rel_tol * 1e-2, 1e-9);

  std::vector<double> cuts{0.0};
  if (const auto* e = std::get_if<Exponential>(&dynamic.spec())) {
    // resolve the decay length of exp(-a t^alpha x)
    for (double c = 1.0 / (e->a * scale); c < 1.0; c *= 8.0) cuts.push_back(c);
  }
  cuts.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += detail::gk_integrate(f, cuts[i - 1], cuts[i], inner_tol).value;
  }
  // Dyadic panels until the tail drops below rel_tol * 1e-2 of the total.
  double lo = 1.0;
  for (int panel = 0;; ++panel) {
    if (panel > 60) detail::throw_numerical("ue_quadrature_stable", "tail did not decay");
    const double hi = 2.0 * lo;
    const double piece = detail::gk_integrate(f, lo, hi, inner_tol).value;
    total += piece;
    if (!std::isfinite(total)) detail::throw_numerical("ue_quadrature_stable", "non-finite integral");
    if (std::abs(piece) <= rel_tol * 1e-2 * std::abs(total) && std::abs(f(hi)) * hi <= rel_tol * 1e-2 * std::abs(total)) {
      break;
    }
    lo = hi;
  }
  return total;
}

SubordinatedCurve subordinate_curve(const SubordinatorModel& model, const Dynamic& dynamic,
                                    std::span<const double> grid, Route route, const InversionConfig& cfg,
                                    unsigned workers) {
  if (route != Route::Transform) {
    if (!std::holds_alternative<StableC1>(model.spec())) {
      throw UnsupportedError("subordinate_curve: closed-form and quadrature routes need the stable model");
    }
  }
  if (route == Route::ClosedForm) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
        detail::throw_domain("subordinate_curve", "grid must be strictly increasing and nonnegative");
      }
    }
  } else {
    require_increasing_positive(grid, "subordinate_curve");
    cfg.validate();
  }
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const double t = grid[i];
    switch (route) {
      case Route::Transform:
        values[i] = ue_eval(model, dynamic, t, cfg);
        break;
      case Route::ClosedForm:
        values[i] = ue_closed_form_stable(std::get<StableC1>(model.spec()).alpha, dynamic, t);
        break;
      case Route::Quadrature:
        values[i] = ue_quadrature_stable(std::get<StableC1>(model.spec()).alpha, dynamic, t);
        break;
    }
  });
  return {model, dynamic, GridFunction(std::vector<double>(grid.begin(), grid.end()), std::move(values)), route};
}

DoubleLaplaceCheck double_laplace_check(double alpha, double p, double lambda) {
  require_stable_alpha(alpha, "double_laplace_check");
  if (!(p > 0.0) || !(lambda > 0.0)) detail::throw_domain("double_laplace_check", "p and lambda must be positive");
  // int_0^inf int_0^inf e^{-p tau - l t} G_t(tau) dtau dt with tau = x t^alpha:
  //   = int_0^inf G_1(x) J(x) dx,  J(x) = int_0^inf exp(-l t - p x t^alpha) dt.
  boost::math::quadrature::exp_sinh<double> inner_rule;
  auto J = [&](double x) {
    auto g = [&](double t) { return std::exp(-lambda * t - p * x * std::pow(t, alpha)); };
    return inner_rule.integrate(g, 1e-12);
  };
  auto f = [&](double x) { return density_G_stable(alpha, 1.0, x) * J(x); };
  double numeric = detail::gk_integrate(f, 0.0, 1.0, 1e-10).value;
  for (double lo = 1.0;; lo *= 2.0) {
    const double piece = detail::gk_integrate(f, lo, 2.0 * lo, 1e-10).value;
    numeric += piece;
    if (std::abs(piece) <= 1e-14 * std::abs(numeric) || lo > 1e6) break;
  }
  const double k = std::pow(lambda, alpha - 1.0);
  const double predicted = k / (lambda * k + p);
  return {numeric, predicted, std::abs(numeric - predicted)};
}

}  // namespace fractime

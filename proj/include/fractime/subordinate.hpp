#pragma once

#include <span>

#include "fractime/grid.hpp"
#include "fractime/lt_invert.hpp"
#include "fractime/models.hpp"

namespace fractime {

enum class Route { Transform, ClosedForm, Quadrature };

/// u^E sampled on a grid together with how it was computed.
struct SubordinatedCurve {
  SubordinatorModel model;
  Dynamic dynamic;
  GridFunction samples;
  Route route;
};

/// t-Laplace transform of u^E(t) = int u(tau) G_t(tau) dtau:
///   mono:n -> n! / (l Phi(l)^n),   exp:a -> K / (a + l K),   user -> K u~(l K).
/// Requires Re l > 0 (DomainError); NumericalError when the value overflows.
cplx ue_transform(const SubordinatorModel& model, const Dynamic& dynamic, cplx lambda);

/// The same transform continued to the slit plane, for contour inversion.
cplx ue_transform_continued(const SubordinatorModel& model, const Dynamic& dynamic, cplx lambda);

/// u^E(t) for t > 0 by numerical inversion of ue_transform.
double ue_eval(const SubordinatorModel& model, const Dynamic& dynamic, double t, const InversionConfig& cfg = {});

/// Inverse-stable closed forms: n! t^(alpha n) / Gamma(alpha n + 1) and
/// E_alpha(-a t^alpha). Valid for t >= 0.
double ue_closed_form_stable(double alpha, const Dynamic& dynamic, double t);

/// u^E(t) = int_0^inf u(tau) G_t(tau) dtau by adaptive quadrature against
/// the Wright density of the inverse stable subordinator.
double ue_quadrature_stable(double alpha, const Dynamic& dynamic, double t, double rel_tol = 1e-8);

/// Evaluates u^E on a grid by the requested route (ClosedForm and Quadrature
/// need a StableC1 model).
SubordinatedCurve subordinate_curve(const SubordinatorModel& model, const Dynamic& dynamic,
                                    std::span<const double> grid, Route route = Route::Transform,
                                    const InversionConfig& cfg = {}, unsigned workers = 1);

struct DoubleLaplaceCheck {
  double numeric;    ///< int int e^{-p tau - l t} G_t(tau) dtau dt by quadrature
  double predicted;  ///< K(l) / (l K(l) + p)
  double residual;   ///< |numeric - predicted|
};

/// Numerical double (tau, t)-Laplace transform of the inverse alpha-stable
/// density compared with K(l)/(l K(l) + p).
DoubleLaplaceCheck double_laplace_check(double alpha, double p, double lambda);

}  // namespace fractime

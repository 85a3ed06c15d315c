#pragma once

// Adaptive Gauss-Kronrod wrappers shared by the numerical modules.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "format.hpp"
#include "fractime/errors.hpp"

namespace fractime::detail {

struct QuadResult {
  double value;
  double error;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b]; b may be +infinity.
template <class F>
QuadResult gk_integrate(F&& f, double a, double b, double rel_tol, unsigned max_depth = 18) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
  return {v, err};
}

/// As gk_integrate, but signals NumericalError when the error estimate
/// exceeds `accept` times the requested relative tolerance.
template <class F>
double gk_integrate_checked(F&& f, double a, double b, double rel_tol, const char* where,
                            double abs_floor = 0.0, double accept = 100.0) {
  const auto r = gk_integrate(std::forward<F>(f), a, b, rel_tol);
  if (!std::isfinite(r.value)) throw_numerical(where, "quadrature produced a non-finite value");
  const double bound = accept * (rel_tol * std::abs(r.value) + abs_floor) + 1e-300;
  if (r.error > bound) {
    throw_numerical(where, "quadrature did not converge (value " + fmt_sig(r.value, 6) + ", error estimate " + fmt_sig(r.error, 6) + ")");
  }
  return r.value;
}

/// Tanh-sinh on a finite [a, b], for integrands with endpoint singularities
/// in some derivative, with the same acceptance rule as gk_integrate_checked.
template <class F>
double ts_integrate_checked(F&& f, double a, double b, double rel_tol, const char* where, double accept = 100.0) {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  double err = 0.0;
  double l1 = 0.0;
  const double v = rule.integrate(std::forward<F>(f), a, b, rel_tol, &err, &l1);
  if (!std::isfinite(v)) throw_numerical(where, "quadrature produced a non-finite value");
  if (err > accept * rel_tol * std::abs(v) + 1e-300) {
    throw_numerical(where, "quadrature did not converge (value " + fmt_sig(v, 6) + ", error estimate " + fmt_sig(err, 6) + ")");
  }
  return v;
}

}  // namespace fractime::detail

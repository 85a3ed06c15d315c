#pragma once

#include <span>
#include <string>
#include <vector>

#include "fractime/grid.hpp"
#include "fractime/lt_invert.hpp"
#include "fractime/models.hpp"

namespace fractime {

/// M_t = (1/t) int_0^t u^E(s) ds, obtained by inverting ue_transform(l)/l.
/// Monomial(0) returns exactly 1. DomainError for t <= 0.
double cesaro_mean(const SubordinatorModel& model, const Dynamic& dynamic, double t, const InversionConfig& cfg = {});

/// Cesaro means on a grid (strictly increasing, positive), evaluated on up to
/// `workers` threads.
GridFunction cesaro_curve(const SubordinatorModel& model, const Dynamic& dynamic, std::span<const double> grid,
                          const InversionConfig& cfg = {}, unsigned workers = 1);

enum class FitMode {
  Free,   ///< log C, p and q
  PinP0,  ///< p = 0, fit log C and q
  PinQ0,  ///< q = 0, fit log C and p
};

/// Least-squares fit of log f = log C + p log t + q log log t.
struct AsymptoticFit {
  double log_C = 0.0;
  double p = 0.0;
  double q = 0.0;
  double rms_residual = 0.0;  ///< in log space
  double t_min = 0.0;
  double t_max = 0.0;
  FitMode mode = FitMode::Free;
};

/// Requires >= 8 samples, abscissae >= 10 spanning >= 4 decades and positive
/// values (DomainError). A rank-deficient design raises NumericalError.
AsymptoticFit fit_rate(const GridFunction& samples, FitMode mode = FitMode::Free);

/// Relative spread max/min - 1 of f(t) / (log t)^q over samples with
/// t >= t_max / 10.
double stabilized_variation(const GridFunction& samples, double q);

struct ExponentCheck {
  double measured = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;  ///< |measured - predicted|
  double tolerance = 0.0;
  bool gated = false;  ///< counts toward `passed`
  bool pass = true;
};

struct VerificationReport {
  std::string model;
  std::string dynamic;
  Prediction prediction{0.0, 0.0};
  GridFunction cesaro;
  AsymptoticFit free_fit;
  /// p pinned to 0 for C2/C3 and q pinned to 0 for C1.
  AsymptoticFit constrained_fit;
  ExponentCheck p;
  ExponentCheck q;
  bool passed = false;
};

/// Cesaro means on `grid`, free and constrained fits, and comparison with
/// predicted_exponents. C1 gates p (from the q = 0 fit); C2 and C3 gate q
/// (from the p = 0 fit).
VerificationReport verify_class(const SubordinatorModel& model, const Dynamic& dynamic, std::span<const double> grid,
                                const InversionConfig& cfg, double tol_p, double tol_q, unsigned workers = 1);

/// 25 log-spaced points over [1e2, 1e8] (C1) or [1e4, 1e12] (C2, C3).
std::vector<double> default_verification_grid(const SubordinatorModel& model);

std::string to_string(FitMode mode);

}  // namespace fractime

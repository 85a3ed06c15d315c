#pragma once

#include <functional>
#include <span>

#include "fractime/grid.hpp"
#include "fractime/models.hpp"

namespace fractime {

enum class InversionMethod { Talbot, GaverStehfest };

struct InversionConfig {
  InversionMethod method = InversionMethod::Talbot;
  int terms = 32;
  /// Fixed-Talbot contour scale: r = talbot_shape * terms / t.
  double talbot_shape = 0.2;

  static InversionConfig talbot(int terms = 32, double shape = 0.2) {
    return {InversionMethod::Talbot, terms, shape};
  }
  static InversionConfig gaver_stehfest(int terms = 16) { return {InversionMethod::GaverStehfest, terms, 0.2}; }

  /// Talbot: terms >= 16, shape > 0. Gaver-Stehfest: even terms in [2, 18].
  /// Throws ConfigError.
  void validate() const;
};

using ComplexTransform = std::function<cplx(cplx)>;
using RealTransform = std::function<double(double)>;

/// Fixed-Talbot inversion of F at t > 0. F must be analytic in the plane
/// slit along the negative real axis; singularities off that axis are only
/// handled while they lie inside the contour, which crosses the imaginary
/// axis at +-talbot_shape * terms * pi / (2 t). NumericalError on non-finite contour
/// values.
double talbot_invert(const ComplexTransform& F, double t, const InversionConfig& cfg = {});

/// Gaver-Stehfest inversion using real samples F(k ln2 / t), k = 1..terms.
double gaver_stehfest_invert(const RealTransform& F, double t,
                             const InversionConfig& cfg = InversionConfig::gaver_stehfest());

/// Inverts F at every grid point (strictly increasing, t > 0) with the
/// method selected in cfg; points are evaluated on up to `workers` threads.
/// Failures name the offending abscissa.
GridFunction invert_on_grid(const ComplexTransform& F, std::span<const double> grid, const InversionConfig& cfg = {},
                            unsigned workers = 1);

/// Single-point dispatch on cfg.method (Gaver-Stehfest uses Re F on the real axis).
double invert(const ComplexTransform& F, double t, const InversionConfig& cfg = {});

}  // namespace fractime

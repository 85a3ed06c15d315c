#pragma once

#include "fractime/grid.hpp"
#include "fractime/models.hpp"

namespace fractime {

/// General fractional relaxation  D^(k) u = -a u,  u(0) = u0,  on [0, T].
struct RelaxationProblem {
  SubordinatorModel model;
  double a = 1.0;
  double u0 = 1.0;
  double h = 1e-3;
  double horizon = 5.0;
  /// Below this time the mesh is locally refined, step min(h, t h / grading_horizon),
  /// starting at 1e-6 h; this resolves the weak singularity of u at t = 0.
  /// Zero gives the plain uniform mesh {0, h, 2h, ..., T}.
  double grading_horizon = 0.2;
};

/// Solves the once-integrated equation
///   (k * u)(t) - u0 int_0^t k = -a int_0^t u
/// with product-rectangle weights int_{t_{j-1}}^{t_j} k(t_m - s) ds and an
/// implicit right-rectangle rule for the right side. The returned mesh starts
/// at t = 0 (value u0) and contains every multiple of h up to T plus the
/// refinement points below grading_horizon.
GridFunction solve_relaxation(const RelaxationProblem& problem);

/// Maximum defect of the discrete integrated equation when `solution` is
/// substituted back on its own mesh. DomainError if the mesh does not start
/// at (0, u0) or does not end at T.
double residual_check(const GridFunction& solution, const RelaxationProblem& problem);

/// Values of a relaxation solution at the uniform output points {0, h, ..., T}.
GridFunction uniform_samples(const GridFunction& solution, double h);

}  // namespace fractime

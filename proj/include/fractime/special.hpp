#pragma once

namespace fractime {

/// Gamma function; DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Gamma(x), entire: zero at the poles of Gamma.
double rgamma(double x);

/// Switchover points for E_alpha(-x): power series below `series_radius`,
/// algebraic asymptotic expansion above `asymptotic_threshold`, and the
/// spectral integral in between (or whenever the other two lose accuracy).
struct MLRegime {
  double series_radius = 5.0;
  double asymptotic_threshold = 50.0;
  void validate() const;
};

/// E_alpha(-x) for 0 < alpha <= 1 and x >= 0.
double mittag_leffler(double alpha, double x, const MLRegime& regime = {});

/// Wright function W_{mu,nu}(z) = sum_n z^n / (n! Gamma(mu n + nu)) for
/// -1 < mu < 0 and z <= 0. When nu = 1 + mu (the inverse-stable density) and
/// |z| > 1 the value comes from a positive Zolotarev-type integral instead of
/// the alternating series. Any other case that the series cannot resolve in
/// double precision within 200 terms raises NumericalError.
double wright(double mu, double nu, double z);

/// Density of the inverse alpha-stable subordinator E(t) at tau >= 0:
/// t^-alpha W_{-alpha,1-alpha}(-tau t^-alpha).
double density_G_stable(double alpha, double t, double tau);

}  // namespace fractime

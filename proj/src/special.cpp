#include "fractime/special.hpp"

#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "detail/quad.hpp"
#include "fractime/errors.hpp"

namespace fractime {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// Neumaier-compensated accumulator in extended precision.
struct CompensatedSum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] long double value() const { return sum + comp; }
};

/// log|1/Gamma(x)| and the sign of 1/Gamma(x); `zero` is set at the poles.
struct LogRGamma {
  long double log_abs;
  int sign;
  bool zero;
};

LogRGamma log_rgamma(long double x) {
  if (x <= 0.0L && x == std::floor(x)) return {0.0L, 0, true};
  if (x > 0.0L) return {-std::lgamma(x), 1, false};
  // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
  const double s = boost::math::sin_pi(static_cast<double>(x));
  if (s == 0.0) return {0.0L, 0, true};
  return {std::lgamma(1.0L - x) + std::log(std::fabs(static_cast<long double>(s))) - std::log(std::numbers::pi_v<long double>),
          s > 0.0 ? 1 : -1, false};
}

// E_alpha(-x) by its power series. `ok` reports whether cancellation left at
// least ~13 significant digits.
double ml_series(double alpha, double x, bool& ok) {
  CompensatedSum acc;
  long double max_term = 0.0L;
  const long double lx = std::log(static_cast<long double>(x));
  bool past_peak = false;
  long double prev = 0.0L;
  for (int n = 0; n < 4000; ++n) {
    const long double mag = std::exp(n * lx - std::lgamma(static_cast<long double>(alpha) * n + 1.0L));
    const long double term = (n % 2 == 0) ? mag : -mag;
    acc.add(term);
    max_term = std::max(max_term, mag);
    if (n > 0 && mag < prev) past_peak = true;
    prev = mag;
    if (past_peak && mag < 1e-21L * std::fabs(acc.value())) break;
  }
  const long double v = acc.value();
  ok = v > 0.0L && max_term / v < 1e5L;
  return static_cast<double>(v);
}

// Algebraic expansion E_alpha(-x) ~ sum_k (-1)^(k+1) x^-k / Gamma(1 - alpha k).
double ml_asymptotic(double alpha, double x, bool& ok) {
  CompensatedSum acc;
  const long double lx = std::log(static_cast<long double>(x));
  long double prev_bound = INFINITY;
  ok = false;
  for (int k = 1; k <= 400; ++k) {
    const long double ak = static_cast<long double>(alpha) * k;
    // 1/Gamma(1 - ak) = Gamma(ak) sin(pi ak) / pi
    const long double bound = std::exp(std::lgamma(ak) - k * lx) / std::numbers::pi_v<long double>;
    if (bound > prev_bound) return static_cast<double>(acc.value());
    prev_bound = bound;
    const double s = boost::math::sin_pi(static_cast<double>(ak));
    const long double term = bound * s * ((k % 2 == 1) ? 1.0L : -1.0L);
    acc.add(term);
    if (bound < 1e-18L * std::fabs(acc.value())) {
      ok = true;
      break;
    }
  }
  return static_cast<double>(acc.value());
}

// E_alpha(-x) from the spectral (completely monotone) representation
//   E_alpha(-x) = sin(alpha pi)/(alpha pi) * int_0^1 [exp(-(x y)^(1/alpha))
//                 + exp(-(x/y)^(1/alpha))] / (y^2 + 2 y cos(alpha pi) + 1) dy
// whose integrand is positive, so relative accuracy is retained.
double ml_integral(double alpha, double x) {
  const double c = std::cos(alpha * kPi);
  const double inv = 1.0 / alpha;
  auto f = [&](double y) {
    const double d = y * y + 2.0 * y * c + 1.0;
    const double e1 = std::exp(-std::pow(x * y, inv));
    const double e2 = y > 0.0 ? std::exp(-std::pow(x / y, inv)) : 0.0;
    return (e1 + e2) / d;
  };
  double total = 0.0;
  const double split = (x > 1.0) ? 1.0 / x : 0.5;
  total += detail::ts_integrate_checked(f, 0.0, split, 1e-13, "mittag_leffler");
  total += detail::gk_integrate_checked(f, split, 1.0, 1e-12, "mittag_leffler");
  return std::sin(alpha * kPi) / (alpha * kPi) * total;
}

// Zolotarev-type function A(phi) of the positive alpha-stable law; A is
// increasing on (0, pi) from (1-alpha) alpha^(alpha/(1-alpha)) to infinity.
double zolotarev_A(double alpha, double phi) {
  if (phi <= 0.0) return (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
  const double sp = std::sin(phi);
  return std::pow(std::sin(alpha * phi) / sp, alpha / (1.0 - alpha)) * (std::sin((1.0 - alpha) * phi) / sp);
}

// W_{-alpha,1-alpha}(-x) for x > 0 via P(E(1) <= x) = P(S(1) >= x^(-1/alpha))
// and the Kanter representation of S(1):
//   G_1(x) = zeta / ((1-alpha) x pi) * int_0^pi A e^{-A zeta} dphi,
//   zeta = x^(1/(1-alpha)).
double inverse_stable_density_integral(double alpha, double x) {
  const double zeta = std::pow(x, 1.0 / (1.0 - alpha));
  const double a0 = zolotarev_A(alpha, 0.0);
  const double lead = -a0 * zeta;
  if (lead < -745.0) return 0.0;
  auto f = [&](double phi) {
    const double a = zolotarev_A(alpha, phi);
    const double e = (a - a0) * zeta;
    if (!std::isfinite(a) || e > 745.0) return 0.0;
    return a * std::exp(-e);
  };
  const double integral = detail::gk_integrate_checked(f, 0.0, kPi, 1e-12, "wright");
  return std::exp(lead) * integral * zeta / ((1.0 - alpha) * x * kPi);
}

double wright_series(double mu, double nu, double z) {
  CompensatedSum acc;
  const long double lz = std::log(std::fabs(static_cast<long double>(z)));
  long double max_bound = 0.0L;
  long double prev = INFINITY;
  bool converged = false;
  for (int n = 0; n < 200; ++n) {
    const long double arg = static_cast<long double>(mu) * n + nu;
    // |1/Gamma(arg)| bound without the oscillating sine factor
    const long double lg = arg > 0.0L ? -std::lgamma(arg) : std::lgamma(1.0L - arg) - std::log(std::numbers::pi_v<long double>);
    const long double bound = std::exp(n * lz - std::lgamma(n + 1.0L) + lg);
    max_bound = std::max(max_bound, bound);
    const auto rg = log_rgamma(arg);
    if (!rg.zero) {
      long double term = std::exp(n * lz - std::lgamma(n + 1.0L) + rg.log_abs) * rg.sign;
      if (n % 2 == 1) term = -term;  // z <= 0
      acc.add(term);
    }
    if (bound < prev && bound < 1e-20L * std::max(std::fabs(acc.value()), 1e-300L)) {
      converged = true;
      break;
    }
    prev = bound;
  }
  if (!converged) {
    detail::throw_numerical("wright", "series terms did not decay within 200 terms at z=" + std::to_string(z));
  }
  const long double v = acc.value();
  if (max_bound > 1e8L * std::fabs(v)) {
    detail::throw_numerical("wright", "series cancellation too severe at z=" + std::to_string(z));
  }
  return static_cast<double>(v);
}

}  // namespace

double gamma_fn(double x) {
  if (std::isnan(x)) detail::throw_domain("gamma_fn", "argument is NaN");
  if (is_nonpositive_integer(x)) detail::throw_domain("gamma_fn", "pole at x=" + std::to_string(x));
  return std::tgamma(x);
}

double rgamma(double x) {
  const auto r = log_rgamma(x);
  if (r.zero) return 0.0;
  return r.sign * static_cast<double>(std::exp(r.log_abs));
}

void MLRegime::validate() const {
  if (!(series_radius > 0.0) || !(asymptotic_threshold > series_radius)) {
    throw ConfigError("MLRegime: need 0 < series_radius < asymptotic_threshold");
  }
}

double mittag_leffler(double alpha, double x, const MLRegime& regime) {
  if (!(alpha > 0.0 && alpha <= 1.0)) detail::throw_domain("mittag_leffler", "alpha must lie in (0, 1]");
  if (!(x >= 0.0) || std::isinf(x)) detail::throw_domain("mittag_leffler", "x must be finite and >= 0");
  regime.validate();
  if (x == 0.0) return 1.0;
  if (alpha == 1.0) return std::exp(-x);
  bool ok = false;
  if (x <= regime.series_radius) {
    const double v = ml_series(alpha, x, ok);
    if (ok) return v;
  } else if (x >= regime.asymptotic_threshold) {
    const double v = ml_asymptotic(alpha, x, ok);
    if (ok) return v;
  }
  return ml_integral(alpha, x);
}

double wright(double mu, double nu, double z) {
  if (!(mu > -1.0 && mu < 0.0)) detail::throw_domain("wright", "mu must lie in (-1, 0)");
  if (!(z <= 0.0) || !std::isfinite(nu)) detail::throw_domain("wright", "z must be <= 0");
  if (z == 0.0) return rgamma(nu);
  const bool density_form = std::fabs(nu - (1.0 + mu)) <= 1e-14;
  if (density_form && z < -1.0) return inverse_stable_density_integral(-mu, -z);
  return wright_series(mu, nu, z);
}

double density_G_stable(double alpha, double t, double tau) {
  if (!(alpha > 0.0 && alpha < 1.0)) detail::throw_domain("density_G_stable", "alpha must lie in (0, 1)");
  if (!(t > 0.0) || !std::isfinite(t)) detail::throw_domain("density_G_stable", "t must be positive");
  if (!(tau >= 0.0)) detail::throw_domain("density_G_stable", "tau must be >= 0");
  if (std::isinf(tau)) return 0.0;
  const double scale = std::pow(t, -alpha);
  return scale * wright(-alpha, 1.0 - alpha, -tau * scale);
}

}  // namespace fractime

#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

namespace fractime {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Subordinator models
// ---------------------------------------------------------------------------

/// alpha-stable subordinator, Phi(l) = l^alpha.
struct StableC1 {
  double alpha;
};

/// Sum of two independent stable subordinators, Phi(l) = l^alpha + l^beta.
struct TwoStableC1 {
  double alpha;
  double beta;
};

/// Distributed-order kernel k(t) = int_0^1 t^(a-1)/Gamma(a) da,
/// K(l) = (l-1)/(l log l).
struct DistributedOrderC2 {};

/// Log-class kernel defined through its transform,
/// K(l) = scale / l * (1 + log(1 + 1/l))^(-1-s).
struct ParametricC3 {
  double s;
  double scale = 1.0;
};

enum class KernelClass { C1, C2, C3 };

/// Immutable description of a driftless subordinator by its Laplace exponent
/// Phi and kernel transform K = Phi/l. All members are pure and thread safe.
class SubordinatorModel {
 public:
  using Spec = std::variant<StableC1, TwoStableC1, DistributedOrderC2, ParametricC3>;

  /// Validates parameters; throws DomainError on out-of-range values.
  explicit SubordinatorModel(Spec spec);

  static SubordinatorModel stable(double alpha) { return SubordinatorModel(StableC1{alpha}); }
  static SubordinatorModel two_stable(double alpha, double beta) {
    return SubordinatorModel(TwoStableC1{alpha, beta});
  }
  static SubordinatorModel distributed_order() { return SubordinatorModel(DistributedOrderC2{}); }
  static SubordinatorModel parametric_c3(double s, double scale = 1.0) {
    return SubordinatorModel(ParametricC3{s, scale});
  }

  [[nodiscard]] const Spec& spec() const { return spec_; }
  [[nodiscard]] KernelClass kernel_class() const;
  /// Configuration name: "stable", "two-stable", "distributed-order" or "c3".
  [[nodiscard]] std::string class_name() const;
  /// Canonical one-line description, e.g. "class=stable alpha=0.5".
  [[nodiscard]] std::string describe() const;

  /// Laplace exponent; requires Re l >= 0.
  [[nodiscard]] cplx phi(cplx lambda) const;
  /// Kernel transform K(l); requires Re l > 0.
  [[nodiscard]] cplx kappa(cplx lambda) const;
  [[nodiscard]] double phi(double lambda) const { return phi(cplx(lambda, 0.0)).real(); }
  [[nodiscard]] double kappa(double lambda) const { return kappa(cplx(lambda, 0.0)).real(); }

  /// Analytic continuation of Phi and K to the plane slit along (-inf, 0].
  /// Contour inversion evaluates transforms here; the branch cuts of all
  /// built-in models lie on the negative real axis.
  [[nodiscard]] cplx phi_continued(cplx lambda) const;
  [[nodiscard]] cplx kappa_continued(cplx lambda) const;

  /// Kernel k(t) = sigma((t, inf)). UnsupportedError for ParametricC3.
  [[nodiscard]] double kernel_k(double t) const;
  /// int_0^t k(s) ds. UnsupportedError for ParametricC3.
  [[nodiscard]] double kernel_integral(double t) const;
  [[nodiscard]] bool has_kernel() const;

  /// Levy density d sigma / d tau = -k'(tau). Available for the stable,
  /// two-stable and distributed-order models.
  [[nodiscard]] double levy_density(double tau) const;
  [[nodiscard]] bool has_levy_density() const { return has_kernel(); }

 private:
  Spec spec_;
};

/// Parses `key = value` lines (`#` comments, optional quotes):
///   class = "stable" | "two-stable" | "distributed-order" | "c3"
///   alpha, beta, s, scale = <number>
/// Throws ConfigError on unknown keys, missing parameters or bad numbers.
SubordinatorModel parse_model(std::string_view text);

// ---------------------------------------------------------------------------
// Dynamics
// ---------------------------------------------------------------------------

struct Monomial {
  int n;
};

struct Exponential {
  double a;
};

/// Laplace transform u~(l) of a user dynamic, analytic for Re l > 0 and on
/// the inversion contour.
struct UserTransform {
  std::function<cplx(cplx)> transform;
};

/// u(t) = t^n, u(t) = exp(-a t), or a user-supplied transform.
class Dynamic {
 public:
  using Spec = std::variant<Monomial, Exponential, UserTransform>;
  explicit Dynamic(Spec spec);

  static Dynamic monomial(int n) { return Dynamic(Monomial{n}); }
  static Dynamic exponential(double a) { return Dynamic(Exponential{a}); }
  static Dynamic user(std::function<cplx(cplx)> f) { return Dynamic(UserTransform{std::move(f)}); }

  [[nodiscard]] const Spec& spec() const { return spec_; }
  /// "mono:<n>", "exp:<a>" or "user".
  [[nodiscard]] std::string describe() const;
  /// u(t) for the elementary dynamics; UnsupportedError for UserTransform.
  [[nodiscard]] double operator()(double t) const;

 private:
  Spec spec_;
};

/// Parses "mono:<n>" or "exp:<a>".
Dynamic parse_dynamic(std::string_view text);

// ---------------------------------------------------------------------------
// Predicted Cesaro exponents
// ---------------------------------------------------------------------------

/// Cesaro-mean asymptotics M_t ~ C t^p (log t)^q.
struct Prediction {
  double p;
  double q;
};

/// Exponents predicted for the kernel class of `model`. For TwoStableC1 the
/// smaller index alpha governs. UnsupportedError for user dynamics.
Prediction predicted_exponents(const SubordinatorModel& model, const Dynamic& dynamic);

}  // namespace fractime

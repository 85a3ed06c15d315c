#include "fractime/models.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "detail/format.hpp"
#include "detail/quad.hpp"
#include "fractime/errors.hpp"
#include "fractime/special.hpp"

namespace fractime {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// K(l) = (l-1)/(l log l); near l = 1 the ratio (l-1)/log l is replaced by its
// Taylor expansion 1 + e/2 - e^2/12 with e = l - 1.
cplx distributed_ratio(cplx lambda) {
  const cplx e = lambda - 1.0;
  if (std::abs(e) < 1e-4) return 1.0 + e / 2.0 - e * e / 12.0;
  return e / std::log(lambda);
}

cplx c3_phi(const ParametricC3& m, cplx lambda) {
  return m.scale * std::pow(1.0 + std::log(1.0 + 1.0 / lambda), -1.0 - m.s);
}

// int_0^1 exp(lt (a - shift)) w(a, 1 - a) da for smooth, bounded w. The integrand
// peaks at a = 1 (lt > 0) or a = 0 (lt < 0); with b the distance from that
// end it equals exp((end - shift) lt) exp(-b |lt|) w(a), which is integrated
// in b. Beyond b = 40/|lt| the factor is below exp(-40) and is dropped.
template <class W>
double log_weighted_integral(double lt, double shift, W w, const char* where) {
  const double end = lt > 0.0 ? 1.0 : 0.0;
  const double mag = std::abs(lt);
  auto f = [&](double b) { return std::exp(-b * mag) * (lt > 0.0 ? w(1.0 - b, b) : w(b, 1.0 - b)); };
  const double upper = mag > 80.0 ? 40.0 / mag : 1.0;
  return std::exp((end - shift) * lt) * detail::gk_integrate_checked(f, 0.0, upper, 1e-12, where);
}

// k(t) = int_0^1 t^(a-1)/Gamma(a) da
double distributed_kernel(double t) {
  return log_weighted_integral(std::log(t), 1.0, [](double a, double) { return rgamma(a); }, "kernel_k");
}

// int_0^t k = int_0^1 t^a/Gamma(a+1) da
double distributed_kernel_integral(double t) {
  return log_weighted_integral(std::log(t), 0.0, [](double a, double) { return rgamma(a + 1.0); }, "kernel_integral");
}

// -k'(t) = int_0^1 (1-a) t^(a-2) / Gamma(a) da
double distributed_levy_density(double t) {
  return log_weighted_integral(std::log(t), 2.0, [](double a, double c) { return c * rgamma(a); }, "levy_density");
}

double stable_levy(double alpha, double tau) {
  return alpha / std::tgamma(1.0 - alpha) * std::pow(tau, -1.0 - alpha);
}

void check_index(double a, const char* name) {
  if (!(a > 0.0 && a < 1.0)) detail::throw_domain("SubordinatorModel", std::string(name) + " must lie in (0, 1)");
}

}  // namespace

SubordinatorModel::SubordinatorModel(Spec spec) : spec_(spec) {
  std::visit(overloaded{
                 [](const StableC1& m) { check_index(m.alpha, "alpha"); },
                 [](const TwoStableC1& m) {
                   check_index(m.alpha, "alpha");
                   check_index(m.beta, "beta");
                   if (!(m.beta > m.alpha)) detail::throw_domain("SubordinatorModel", "two-stable needs alpha < beta");
                 },
                 [](const DistributedOrderC2&) {},
                 [](const ParametricC3& m) {
                   if (!(m.s > 0.0) || !std::isfinite(m.s)) detail::throw_domain("SubordinatorModel", "s must be positive");
                   if (!(m.scale > 0.0) || !std::isfinite(m.scale)) {
                     detail::throw_domain("SubordinatorModel", "scale must be positive");
                   }
                 },
             },
             spec_);
}

KernelClass SubordinatorModel::kernel_class() const {
  return std::visit(overloaded{
                        [](const StableC1&) { return KernelClass::C1; },
                        [](const TwoStableC1&) { return KernelClass::C1; },
                        [](const DistributedOrderC2&) { return KernelClass::C2; },
                        [](const ParametricC3&) { return KernelClass::C3; },
                    },
                    spec_);
}

std::string SubordinatorModel::class_name() const {
  return std::visit(overloaded{
                        [](const StableC1&) { return std::string("stable"); },
                        [](const TwoStableC1&) { return std::string("two-stable"); },
                        [](const DistributedOrderC2&) { return std::string("distributed-order"); },
                        [](const ParametricC3&) { return std::string("c3"); },
                    },
                    spec_);
}

std::string SubordinatorModel::describe() const {
  using detail::fmt_num;
  return std::visit(overloaded{
                        [](const StableC1& m) { return "class=stable alpha=" + fmt_num(m.alpha); },
                        [](const TwoStableC1& m) {
                          return "class=two-stable alpha=" + fmt_num(m.alpha) + " beta=" + fmt_num(m.beta);
                        },
                        [](const DistributedOrderC2&) { return std::string("class=distributed-order"); },
                        [](const ParametricC3& m) { return "class=c3 s=" + fmt_num(m.s) + " scale=" + fmt_num(m.scale); },
                    },
                    spec_);
}

cplx SubordinatorModel::phi_continued(cplx lambda) const {
  if (lambda == 0.0) return 0.0;
  return std::visit(overloaded{
                        [&](const StableC1& m) { return std::pow(lambda, m.alpha); },
                        [&](const TwoStableC1& m) { return std::pow(lambda, m.alpha) + std::pow(lambda, m.beta); },
                        [&](const DistributedOrderC2&) { return distributed_ratio(lambda); },
                        [&](const ParametricC3& m) { return c3_phi(m, lambda); },
                    },
                    spec_);
}

cplx SubordinatorModel::kappa_continued(cplx lambda) const {
  return std::visit(overloaded{
                        [&](const StableC1& m) { return std::pow(lambda, m.alpha - 1.0); },
                        [&](const TwoStableC1& m) {
                          return std::pow(lambda, m.alpha - 1.0) + std::pow(lambda, m.beta - 1.0);
                        },
                        [&](const DistributedOrderC2&) { return distributed_ratio(lambda) / lambda; },
                        [&](const ParametricC3& m) { return c3_phi(m, lambda) / lambda; },
                    },
                    spec_);
}

cplx SubordinatorModel::phi(cplx lambda) const {
  if (!(lambda.real() >= 0.0) || !std::isfinite(lambda.imag()) || !std::isfinite(lambda.real())) {
    detail::throw_domain("phi", "requires Re(lambda) >= 0");
  }
  return phi_continued(lambda);
}

cplx SubordinatorModel::kappa(cplx lambda) const {
  if (!(lambda.real() > 0.0) || !std::isfinite(lambda.imag()) || !std::isfinite(lambda.real())) {
    detail::throw_domain("kappa", "requires Re(lambda) > 0");
  }
  return kappa_continued(lambda);
}

bool SubordinatorModel::has_kernel() const { return !std::holds_alternative<ParametricC3>(spec_); }

double SubordinatorModel::kernel_k(double t) const {
  if (!(t > 0.0)) detail::throw_domain("kernel_k", "t must be positive");
  return std::visit(overloaded{
                        [&](const StableC1& m) { return std::pow(t, -m.alpha) / std::tgamma(1.0 - m.alpha); },
                        [&](const TwoStableC1& m) {
                          return std::pow(t, -m.alpha) / std::tgamma(1.0 - m.alpha) +
                                 std::pow(t, -m.beta) / std::tgamma(1.0 - m.beta);
                        },
                        [&](const DistributedOrderC2&) { return distributed_kernel(t); },
                        [&](const ParametricC3&) -> double {
                          throw UnsupportedError("kernel_k: the c3 model is defined only through K(lambda)");
                        },
                    },
                    spec_);
}

double SubordinatorModel::kernel_integral(double t) const {
  if (!(t >= 0.0)) detail::throw_domain("kernel_integral", "t must be >= 0");
  if (t == 0.0) {
    if (!has_kernel()) throw UnsupportedError("kernel_integral: the c3 model has no kernel");
    return 0.0;
  }
  return std::visit(overloaded{
                        [&](const StableC1& m) { return std::pow(t, 1.0 - m.alpha) / std::tgamma(2.0 - m.alpha); },
                        [&](const TwoStableC1& m) {
                          return std::pow(t, 1.0 - m.alpha) / std::tgamma(2.0 - m.alpha) +
                                 std::pow(t, 1.0 - m.beta) / std::tgamma(2.0 - m.beta);
                        },
                        [&](const DistributedOrderC2&) { return distributed_kernel_integral(t); },
                        [&](const ParametricC3&) -> double {
                          throw UnsupportedError("kernel_integral: the c3 model has no kernel");
                        },
                    },
                    spec_);
}

double SubordinatorModel::levy_density(double tau) const {
  if (!(tau > 0.0)) detail::throw_domain("levy_density", "tau must be positive");
  return std::visit(overloaded{
                        [&](const StableC1& m) { return stable_levy(m.alpha, tau); },
                        [&](const TwoStableC1& m) { return stable_levy(m.alpha, tau) + stable_levy(m.beta, tau); },
                        [&](const DistributedOrderC2&) { return distributed_levy_density(tau); },
                        [&](const ParametricC3&) -> double {
                          throw UnsupportedError("levy_density: not available for the c3 model");
                        },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

double parse_number(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    throw ConfigError("model config: '" + key + "' is not a number: " + v);
  }
  return out;
}

}  // namespace

SubordinatorModel parse_model(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("model config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(body).substr(eq + 1)));
    if (key != "class" && key != "alpha" && key != "beta" && key != "s" && key != "scale") {
      throw ConfigError("model config: unknown key '" + key + "'");
    }
    if (kv.count(key)) throw ConfigError("model config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  if (!kv.count("class")) throw ConfigError("model config: missing 'class'");
  auto need = [&](const std::string& key) {
    if (!kv.count(key)) throw ConfigError("model config: class '" + kv["class"] + "' requires '" + key + "'");
    return parse_number(key, kv[key]);
  };
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (kv.count(k)) throw ConfigError("model config: '" + std::string(k) + "' is not a parameter of class '" + kv["class"] + "'");
    }
  };
  const std::string& cls = kv["class"];
  try {
    if (cls == "stable") {
      forbid({"beta", "s", "scale"});
      return SubordinatorModel::stable(need("alpha"));
    }
    if (cls == "two-stable") {
      forbid({"s", "scale"});
      return SubordinatorModel::two_stable(need("alpha"), need("beta"));
    }
    if (cls == "distributed-order") {
      forbid({"alpha", "beta", "s", "scale"});
      return SubordinatorModel::distributed_order();
    }
    if (cls == "c3") {
      forbid({"alpha", "beta"});
      const double scale = kv.count("scale") ? parse_number("scale", kv["scale"]) : 1.0;
      return SubordinatorModel::parametric_c3(need("s"), scale);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  throw ConfigError("model config: unknown class '" + cls + "'");
}

// ---------------------------------------------------------------------------

Dynamic::Dynamic(Spec spec) : spec_(std::move(spec)) {
  if (const auto* m = std::get_if<Monomial>(&spec_); m && m->n < 0) {
    detail::throw_domain("Dynamic", "monomial degree must be >= 0");
  }
  if (const auto* e = std::get_if<Exponential>(&spec_); e && !(e->a > 0.0 && std::isfinite(e->a))) {
    detail::throw_domain("Dynamic", "exponential rate must be positive");
  }
  if (const auto* u = std::get_if<UserTransform>(&spec_); u && !u->transform) {
    detail::throw_domain("Dynamic", "user transform is empty");
  }
}

std::string Dynamic::describe() const {
  return std::visit(overloaded{
                        [](const Monomial& m) { return "mono:" + std::to_string(m.n); },
                        [](const Exponential& e) { return "exp:" + detail::fmt_num(e.a); },
                        [](const UserTransform&) { return std::string("user"); },
                    },
                    spec_);
}

double Dynamic::operator()(double t) const {
  return std::visit(overloaded{
                        [&](const Monomial& m) { return std::pow(t, m.n); },
                        [&](const Exponential& e) { return std::exp(-e.a * t); },
                        [&](const UserTransform&) -> double {
                          throw UnsupportedError("Dynamic: a user transform has no time-domain evaluator");
                        },
                    },
                    spec_);
}

Dynamic parse_dynamic(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("dynamic must be mono:<n> or exp:<a>");
  const std::string kind(text.substr(0, colon));
  const std::string arg(text.substr(colon + 1));
  try {
    if (kind == "mono") {
      int n = 0;
      auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
      if (ec != std::errc() || p != arg.data() + arg.size()) throw ConfigError("mono:<n> needs an integer degree");
      return Dynamic::monomial(n);
    }
    if (kind == "exp") return Dynamic::exponential(parse_number("exp", arg));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("dynamic must be mono:<n> or exp:<a>");
}

Prediction predicted_exponents(const SubordinatorModel& model, const Dynamic& dynamic) {
  if (std::holds_alternative<UserTransform>(dynamic.spec())) {
    throw UnsupportedError("predicted_exponents: only monomial and exponential dynamics have predictions");
  }
  const bool mono = std::holds_alternative<Monomial>(dynamic.spec());
  const double n = mono ? std::get<Monomial>(dynamic.spec()).n : 0.0;
  return std::visit(overloaded{
                        [&](const StableC1& m) { return mono ? Prediction{m.alpha * n, 0.0} : Prediction{-m.alpha, 0.0}; },
                        [&](const TwoStableC1& m) {
                          return mono ? Prediction{m.alpha * n, 0.0} : Prediction{-m.alpha, 0.0};
                        },
                        [&](const DistributedOrderC2&) { return mono ? Prediction{0.0, n} : Prediction{0.0, -1.0}; },
                        [&](const ParametricC3& m) {
                          return mono ? Prediction{0.0, (1.0 + m.s) * n} : Prediction{0.0, -(1.0 + m.s)};
                        },
                    },
                    model.spec());
}

}  // namespace fractime

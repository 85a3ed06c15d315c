#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fractime/errors.hpp"
#include "fractime/grid.hpp"
#include "fractime/lt_invert.hpp"
#include "fractime/models.hpp"
#include "fractime/special.hpp"
#include "fractime/subordinate.hpp"
#include "oracles.hpp"

using namespace fractime;

namespace {

struct RationalCase {
  const char* name;
  ComplexTransform F;
  double (*inverse)(double);
};

std::vector<RationalCase> rational_cases() {
  return {
      {"1/l", [](cplx l) { return 1.0 / l; }, [](double) { return 1.0; }},
      {"1/l^2", [](cplx l) { return 1.0 / (l * l); }, [](double t) { return t; }},
      {"2/l^3", [](cplx l) { return 2.0 / (l * l * l); }, [](double t) { return t * t; }},
      {"1/(l+1)", [](cplx l) { return 1.0 / (l + 1.0); }, [](double t) { return std::exp(-t); }},
      {"1/(l+2)", [](cplx l) { return 1.0 / (l + 2.0); }, [](double t) { return std::exp(-2.0 * t); }},
      {"1/(l+1)^2", [](cplx l) { return 1.0 / ((l + 1.0) * (l + 1.0)); }, [](double t) { return t * std::exp(-t); }},
      {"1/(l^2+1)", [](cplx l) { return 1.0 / (l * l + 1.0); }, [](double t) { return std::sin(t); }},
      {"l/(l^2+4)", [](cplx l) { return l / (l * l + 4.0); }, [](double t) { return std::cos(2.0 * t); }},
  };
}

}  // namespace

TEST_CASE("Talbot examples") {
  for (double t : {0.01, 1.0, 7.0, 1e3}) CHECK(talbot_invert([](cplx l) { return 1.0 / l; }, t) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(talbot_invert([](cplx l) { return 1.0 / (l * l); }, 2.5) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(talbot_invert([](cplx l) { return 1.0 / (l + 1.0); }, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("Talbot reaches 1e-10 relative on rational transforms") {
  for (const auto& c : rational_cases()) {
    const bool oscillating = std::string(c.name).find("^2+") != std::string::npos;
    // poles off the real axis must lie inside the contour, whose crossing of
    // the imaginary axis is at shape * terms * pi / (2 t)
    for (double t : log_grid(0.05, oscillating ? 2.0 : 3.0, 25)) {
      const double exact = c.inverse(t);
      INFO(std::string(c.name) << " t=" << t);
      // oscillating inverses pass through zero; measure against their amplitude
      const double scale = oscillating ? 1.0 : std::abs(exact);
      CHECK(std::abs(talbot_invert(c.F, t) - exact) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("Gaver-Stehfest examples") {
  const auto gs = InversionConfig::gaver_stehfest();
  // with 16 terms the weights reach 1e9, so rounding of the transform values
  // alone leaves errors of a few 1e-7
  CHECK(gaver_stehfest_invert([](double l) { return 1.0 / l; }, 3.0, gs) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gaver_stehfest_invert([](double l) { return 2.0 / (l * l * l); }, 2.0, gs) == doctest::Approx(4.0).epsilon(1e-6));
  const double e = gaver_stehfest_invert([](double l) { return 1.0 / (l + 2.0); }, 0.5, gs);
  CHECK(std::abs(e - std::exp(-1.0)) <= 1e-6 * std::exp(-1.0));
}

TEST_CASE("Gaver-Stehfest on smooth monotone inverses") {
  const auto gs = InversionConfig::gaver_stehfest();
  // polynomial inverses are reproduced up to rounding of the weights
  for (double t : log_grid(0.1, 100.0, 15)) {
    CHECK(gaver_stehfest_invert([](double l) { return 1.0 / (l * l); }, t, gs) == doctest::Approx(t).epsilon(1e-6));
    CHECK(gaver_stehfest_invert([](double l) { return 1.0 / l; }, t, gs) == doctest::Approx(1.0).epsilon(1e-6));
  }
  // exponentials: the error drops as terms grow up to the double precision limit
  double prev = 1.0;
  for (int n : {8, 12, 16}) {
    const double v = gaver_stehfest_invert([](double l) { return 1.0 / (l + 1.0); }, 1.0, InversionConfig::gaver_stehfest(n));
    const double err = std::abs(v - std::exp(-1.0));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("linearity of the default inversion") {
  const ComplexTransform F = [](cplx l) { return 1.0 / (l + 1.0); };
  const ComplexTransform G = [](cplx l) { return 1.0 / (l * l + 1.0); };
  const double a = 2.5;
  const double b = -0.75;
  const ComplexTransform H = [&](cplx l) { return a * F(l) + b * G(l); };
  for (double t : log_grid(0.05, 20.0, 30)) {
    CHECK(std::abs(invert(H, t) - (a * invert(F, t) + b * invert(G, t))) <= 1e-9);
  }
  // Gaver-Stehfest weights reach 1e9 at 16 terms, so rounding of the
  // transform values limits its linearity to about 1e-7
  const auto gs = InversionConfig::gaver_stehfest();
  const ComplexTransform P = [](cplx l) { return 1.0 / (l * l); };
  const ComplexTransform Q = [&](cplx l) { return a * F(l) + b * P(l); };
  for (double t : {0.2, 1.0, 3.0}) {
    CHECK(std::abs(invert(Q, t, gs) - (a * invert(F, t, gs) + b * invert(P, t, gs))) <= 1e-6);
  }
}

TEST_CASE("Talbot and Gaver-Stehfest agree on the subordinated exponential") {
  const auto model = SubordinatorModel::stable(0.5);
  const ComplexTransform F = [&](cplx l) {
    const cplx k = model.kappa_continued(l);
    return k / (1.0 + l * k);
  };
  for (double t : log_grid(0.1, 100.0, 20)) {
    const double tb = invert(F, t, InversionConfig::talbot());
    const double gs = invert(F, t, InversionConfig::gaver_stehfest());
    INFO("t=" << t);
    CHECK(std::abs(tb - oracle::ml_half_erfc(std::sqrt(t))) <= 1e-10);
    CHECK(std::abs(tb - gs) <= 1e-6 * std::abs(tb));
  }
}

TEST_CASE("invert_on_grid examples and errors") {
  const std::vector<double> g{1.0, 10.0, 100.0};
  const auto ones = invert_on_grid([](cplx l) { return 1.0 / l; }, g);
  REQUIRE(ones.size() == 3);
  for (double v : ones.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> g2{1.0, 2.0, 4.0};
  const auto ramp = invert_on_grid([](cplx l) { return 1.0 / (l * l); }, g2, {}, 3);
  for (std::size_t i = 0; i < g2.size(); ++i) {
    CHECK(ramp.abscissae()[i] == g2[i]);
    CHECK(ramp.values()[i] == doctest::Approx(g2[i]).epsilon(1e-12));
  }
  const std::vector<double> with_zero{0.0, 1.0};
  CHECK_THROWS_AS(invert_on_grid([](cplx l) { return 1.0 / (l + 1.0); }, with_zero), DomainError);
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(invert_on_grid([](cplx l) { return 1.0 / l; }, unsorted), DomainError);

  // a pointwise failure names the abscissa
  const std::vector<double> g3{1.0, 2.0, 3.0};
  try {
    (void)invert_on_grid([](cplx) { return cplx(NAN, 0.0); }, g3);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("t=") != std::string::npos);
  }
}

TEST_CASE("grid results do not depend on the worker count") {
  const auto g = log_grid(0.1, 50.0, 64);
  const ComplexTransform F = [](cplx l) { return 1.0 / (l * l + 1.0); };
  const auto serial = invert_on_grid(F, g, {}, 1);
  const auto parallel = invert_on_grid(F, g, {}, 8);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(serial.values()[i] == parallel.values()[i]);
}

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(InversionConfig::talbot().validate());
  CHECK_NOTHROW(InversionConfig::gaver_stehfest(18).validate());
  CHECK_THROWS_AS(InversionConfig::talbot(8).validate(), ConfigError);
  CHECK_THROWS_AS(InversionConfig::talbot(32, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(InversionConfig::gaver_stehfest(15).validate(), ConfigError);
  CHECK_THROWS_AS(InversionConfig::gaver_stehfest(20).validate(), ConfigError);
  CHECK_THROWS_AS(gaver_stehfest_invert([](double l) { return 1.0 / l; }, 1.0, InversionConfig::gaver_stehfest(20)),
                  ConfigError);
  CHECK_THROWS_AS(talbot_invert([](cplx l) { return 1.0 / l; }, 0.0), DomainError);
  CHECK_THROWS_AS(talbot_invert([](cplx l) { return 1.0 / l; }, -1.0), DomainError);
  CHECK_THROWS_AS(talbot_invert([](cplx) { return cplx(INFINITY, 0.0); }, 1.0), NumericalError);
}

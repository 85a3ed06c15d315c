#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "fractime/errors.hpp"
#include "fractime/grid.hpp"
#include "fractime/parallel.hpp"

using namespace fractime;

TEST_CASE("GridFunction validates its invariants") {
  CHECK_NOTHROW(GridFunction({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0}));
  CHECK_THROWS_AS(GridFunction({1.0, 2.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({1.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({2.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({-1.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({1.0, 2.0}, {1.0, NAN}), DomainError);
}

TEST_CASE("scaling multiplies values only") {
  const GridFunction g({1.0, 2.0}, {3.0, 4.0});
  const auto s = g.scaled(2.0);
  CHECK(s.abscissae()[1] == 2.0);
  CHECK(s.values()[0] == 6.0);
  CHECK(s.values()[1] == 8.0);
}

TEST_CASE("log_grid hits both endpoints and is geometric") {
  const auto g = log_grid(1e2, 1e8, 25);
  REQUIRE(g.size() == 25);
  CHECK(g.front() == 1e2);
  CHECK(g.back() == 1e8);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    CHECK(g[i] / g[i - 1] == doctest::Approx(g[i + 1] / g[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), DomainError);
  CHECK_THROWS_AS(log_grid(2.0, 1.0, 5), DomainError);
}

TEST_CASE("require_increasing_positive names the t>0 precondition") {
  const std::vector<double> bad{0.0, 1.0};
  try {
    require_increasing_positive(bad, "invert_on_grid");
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("t>0") != std::string::npos);
  }
}

TEST_CASE("parallel_for visits every index once") {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  for (unsigned workers : {1u, 4u}) {
    try {
      parallel_for(100, workers, [](std::size_t i) {
        if (i == 17 || i == 63) throw std::runtime_error("index " + std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "index 17");
    }
  }
}

TEST_CASE("FRACTIME_THREADS caps the worker count") {
  ::setenv("FRACTIME_THREADS", "2", 1);
  CHECK(effective_workers(8) == 2);
  CHECK(effective_workers(1) == 1);
  ::unsetenv("FRACTIME_THREADS");
  CHECK(effective_workers(8) == 8);
  CHECK(effective_workers(0) == 1);
}

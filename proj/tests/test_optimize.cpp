#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qtel/optimize.hpp"

using namespace qtel;

TEST_CASE("nelder_mead minimizes a shifted quadratic bowl") {
  auto f = [](const std::vector<double>& x) {
    const double a = x[0] - 1.5, b = x[1] + 0.25;
    return 3.0 * a * a + 0.5 * b * b + 2.0 * a * b + 7.0;
  };
  NmOptions opt;
  opt.max_evals = 2000;
  opt.tol_diameter = 1e-11;
  const NmResult r = nelder_mead(f, {0.0, 0.0}, opt);
  // minimum at the stationary point of the quadratic form
  CHECK(std::abs(r.fmin - (7.0 - 0.0)) < 1e-7);  // positive-definite => min is 7 at critical pt
  const double gx = 6.0 * (r.x[0] - 1.5) + 2.0 * (r.x[1] + 0.25);
  const double gy = 1.0 * (r.x[1] + 0.25) + 2.0 * (r.x[0] - 1.5);
  CHECK(std::abs(gx) < 1e-4);
  CHECK(std::abs(gy) < 1e-4);
  CHECK(r.evaluations <= opt.max_evals + 4);
}

TEST_CASE("nelder_mead handles a separable quartic in four variables") {
  auto f = [](const std::vector<double>& x) {
    double s = -2.0;
    for (double v : x) {
      const double d = v - 0.5;
      s += d * d * d * d + d * d;
    }
    return s;
  };
  NmOptions opt;
  opt.max_evals = 4000;
  opt.tol_diameter = 1e-10;
  opt.init_step = 0.3;
  const NmResult r = nelder_mead(f, {0.0, 1.0, -1.0, 2.0}, opt);
  CHECK(std::abs(r.fmin + 2.0) < 1e-6);
  for (double v : r.x) CHECK(std::abs(v - 0.5) < 1e-2);
}

TEST_CASE("nelder_mead descends the rosenbrock valley") {
  auto f = [](const std::vector<double>& x) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  NmOptions opt;
  opt.max_evals = 6000;
  opt.tol_diameter = 1e-12;
  const NmResult r = nelder_mead(f, {-1.2, 1.0}, opt);
  CHECK(r.fmin < 1e-6);
}

TEST_CASE("nelder_mead respects the evaluation budget") {
  int calls = 0;
  auto f = [&](const std::vector<double>& x) {
    ++calls;
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  };
  NmOptions opt;
  opt.max_evals = 50;
  opt.tol_diameter = 0.0;  // never converge by diameter
  const NmResult r = nelder_mead(f, {3.0, -2.0, 1.0}, opt);
  CHECK(calls <= 55);
  CHECK(r.evaluations == calls);
}

TEST_CASE("nelder_mead reports the simplex diameter at termination") {
  auto f = [](const std::vector<double>& x) { return std::abs(x[0] - 2.0); };
  NmOptions opt;
  opt.max_evals = 2000;
  opt.tol_diameter = 1e-8;
  const NmResult r = nelder_mead(f, {10.0}, opt);
  CHECK(r.diameter <= 1e-8);
  CHECK(std::abs(r.x[0] - 2.0) < 1e-6);
}

TEST_CASE("bisect finds the root of a monotone crossing") {
  const double root = bisect([](double x) { return std::cos(x); }, 0.0, 2.0, 1e-13);
  CHECK(std::abs(root - std::numbers::pi / 2.0) < 1e-12);

  const double cubic = bisect([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, 1e-13);
  CHECK(std::abs(cubic - std::cbrt(2.0)) < 1e-12);
}

TEST_CASE("bisect accepts either bracket orientation") {
  const double root = bisect([](double x) { return 1.0 - x; }, 2.0, 0.0, 1e-13);
  CHECK(std::abs(root - 1.0) < 1e-12);
}

TEST_CASE("bisect rejects brackets without a sign change") {
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                  std::invalid_argument);
}

#include <cmath>

#include "corner/bump.hpp"
#include "doctest.h"

using namespace corner;

namespace {

// Independent mass check at a resolution unrelated to the library's.
double integrate(const BumpSpec& spec, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = 0.5 * (eval_bump(spec, lo) + eval_bump(spec, hi));
  for (int i = 1; i < n; ++i) s += eval_bump(spec, lo + i * h);
  return s * h;
}

}  // namespace

TEST_CASE("unit bump has unit mass") {
  const BumpSpec g = unit_bump(0.2, 0.8);
  CHECK(std::abs(bump_mass(g) - 1.0) < 1e-10);
  CHECK(std::abs(integrate(g, 0.2, 0.8, 400000) - 1.0) < 1e-9);
}

TEST_CASE("cutoff values and monotonicity") {
  const BumpSpec h = cutoff(1.0, 2.0);
  CHECK(eval_bump(h, 0.5) == 1.0);
  CHECK(eval_bump(h, 3.0) == 0.0);
  double prev = 2.0;
  for (int i = 0; i <= 300; ++i) {
    const double v = eval_bump(h, 0.5 + i * 0.01);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("mollifier tail mass stays below eps") {
  for (double eps : {0.05, 0.1, 0.2, 0.5}) {
    const BumpSpec f = mollifier(eps);
    CHECK(eval_bump(f, 0.0) == 1.0);
    CHECK(eval_bump(f, eps) == 0.0);
    CHECK(bump_mass(f) < eps);
  }
}

TEST_CASE("unit bump is numerically flat at the support endpoints") {
  const BumpSpec g = unit_bump(0.2, 0.8);
  const double h = 1e-3;
  for (double t : {0.2, 0.8}) {
    CHECK(eval_bump(g, t) == 0.0);
    const double d1 = (eval_bump(g, t + h) - eval_bump(g, t - h)) / (2 * h);
    const double d2 = (eval_bump(g, t + h) - 2 * eval_bump(g, t) + eval_bump(g, t - h)) / (h * h);
    const double d3 = (eval_bump(g, t + 2 * h) - 2 * eval_bump(g, t + h) + 2 * eval_bump(g, t - h) -
                       eval_bump(g, t - 2 * h)) /
                      (2 * h * h * h);
    CHECK(std::abs(d1) < 1e-8);
    CHECK(std::abs(d2) < 1e-6);
    CHECK(std::abs(d3) < 1e-6);
  }
}

TEST_CASE("analytic derivative matches finite differences") {
  const BumpSpec g = unit_bump(0.1, 0.9);
  const BumpSpec h = cutoff(0.3, 0.7);
  for (double t = 0.05; t < 1.0; t += 0.037) {
    const double eps = 1e-6;
    for (const BumpSpec& s : {g, h}) {
      const double fd = (eval_bump(s, t + eps) - eval_bump(s, t - eps)) / (2 * eps);
      CHECK(std::abs(bump_derivative(s, t) - fd) < 2e-5);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(unit_bump(0.8, 0.2), ParameterError);
  CHECK_THROWS_AS(cutoff(2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(mollifier(0.0), ParameterError);
}

#include <algorithm>
#include <cmath>
#include <set>

#include "corner/geometry.hpp"
#include "doctest.h"

using namespace corner;

TEST_CASE("make_grid produces uniform nodes") {
  const Grid g = make_grid(Domain::cube(1), {5});
  CHECK(g.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(g.coord(0, i) == doctest::Approx(0.25 * i).epsilon(1e-15));

  const Grid q = make_grid(Domain::quadrant(2, 2), {3, 3});
  CHECK(q.size() == 9);
  CHECK(q.spacing[0] == doctest::Approx(0.5));
  CHECK(q.spacing[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(make_grid(Domain::cube(1), {2}), ResolutionError);
}

TEST_CASE("trapezoid weights") {
  const Grid g = make_grid(Domain::cube(1), {3});
  const auto w = quadrature_weights(g);
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK(w[2] == doctest::Approx(0.25));

  const Grid sq = make_grid(Domain::cube(2), {9, 9});
  double sum = 0;
  for (double v : quadrature_weights(sq)) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

  const Grid q = make_grid(Domain::quadrant(2, 2, {2.0, 3.0}), {9, 13});
  sum = 0;
  for (double v : quadrature_weights(q)) {
    CHECK(v > 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("weights integrate multilinear polynomials exactly") {
  const Grid g = make_grid(Domain::cube(2), {7, 11});
  const auto w = quadrature_weights(g);
  double acc = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.point(k);
    acc += w[k] * x[0] * x[1];
  }
  CHECK(std::abs(acc - 0.25) < 1e-12);

  // Simpson is exact on cubics and needs odd node counts.
  const auto ws = quadrature_weights(make_grid(Domain::cube(1), {9}), QuadRule::simpson);
  const Grid g1 = make_grid(Domain::cube(1), {9});
  acc = 0;
  for (std::size_t k = 0; k < g1.size(); ++k) acc += ws[k] * std::pow(g1.point(k)[0], 3);
  CHECK(std::abs(acc - 0.25) < 1e-14);
  CHECK_THROWS_AS(quadrature_weights(make_grid(Domain::cube(1), {8}), QuadRule::simpson),
                  ResolutionError);
}

TEST_CASE("stratum nodes are relatively open") {
  const Grid g = make_grid(Domain::cube(2), {5, 5});
  Stratum edge{{{0, false}}};
  const auto nodes = stratum_nodes(g, edge);
  CHECK(nodes.size() == 3);  // corners excluded
  for (auto k : nodes) CHECK(g.unindex(k)[0] == 0);

  Stratum corner{{{0, false}, {1, false}}};
  CHECK(stratum_nodes(g, corner).size() == 1);
  CHECK(stratum_nodes(g, corner)[0] == 0);

  const Grid q = make_grid(Domain::quadrant(2, 2), {5, 5});
  CHECK(stratum_nodes(q, corner).size() == 1);

  Stratum bad{{{0, true}}};
  CHECK_THROWS_AS(stratum_nodes(q, bad), DomainError);
}

TEST_CASE("strata partition the grid") {
  for (const Grid& g :
       {make_grid(Domain::cube(2), {5, 7}), make_grid(Domain::quadrant(2, 1), {5, 5}),
        make_grid(Domain::cube(3), {4, 4, 4})}) {
    std::set<std::size_t> seen;
    std::size_t count = 0;
    for (const auto& s : enumerate_strata(g.domain)) {
      for (auto k : stratum_nodes(g, s)) {
        CHECK(seen.insert(k).second);  // disjoint
        ++count;
      }
    }
    // Remaining nodes are interior.
    std::size_t interior = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto idx = g.unindex(k);
      bool on = false;
      for (int a = 0; a < g.m(); ++a) {
        if (idx[a] == 0 && g.domain.clamped_low(a)) on = true;
        if (idx[a] == g.n[a] - 1 && g.domain.clamped_high(a)) on = true;
      }
      if (!on) ++interior;
    }
    CHECK(count + interior == g.size());
  }
}

TEST_CASE("stratum grid keeps the remaining axes") {
  const Grid g = make_grid(Domain::quadrant(3, 2, {1.0, 2.0, 3.0}), {5, 7, 9});
  Stratum s{{{0, false}}};
  const Grid r = stratum_grid(g, s);
  CHECK(r.m() == 2);
  CHECK(r.domain.p == 1);
  CHECK(r.n[0] == 7);
  CHECK(r.n[1] == 9);
  CHECK(r.domain.lo(1) == doctest::Approx(-3.0));
}

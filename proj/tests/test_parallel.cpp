#include <cmath>
#include <numbers>

#include "corner/moser.hpp"
#include "corner/parallel.hpp"
#include "corner/verify.hpp"
#include "doctest.h"

using namespace corner;

// The OpenMP kernels write disjoint slots only, so the parallel path must
// reproduce the serial reference bit for bit, for any thread count.

TEST_CASE("glued operator: serial and parallel agree exactly") {
  const Grid g = make_grid(Domain::cube(2), {33, 33});
  const Atlas atlas = cube_atlas(g);
  const FormField alpha = smooth_test_form(g, 1);
  const FormField serial = banyaga_cube(alpha, atlas, Exec::serial);
  set_threads(3);
  const FormField parallel = banyaga_cube(alpha, atlas, Exec::openmp);
  CHECK(sup_diff(serial, parallel) == 0.0);
}

TEST_CASE("quadrant operator: serial and parallel agree exactly") {
  const Grid g = make_grid(Domain::quadrant(2, 2), {33, 33});
  const ReferenceForm ref = default_reference(g);
  const FormField alpha = smooth_test_form(g, 2);
  const FormField serial = banyaga_quadrant(alpha, ref, 2, Exec::serial);
  set_threads(2);
  const FormField parallel = banyaga_quadrant(alpha, ref, 2, Exec::openmp);
  CHECK(sup_diff(serial, parallel) == 0.0);
}

TEST_CASE("flow integration: serial and parallel agree exactly") {
  const Grid g = make_grid(Domain::cube(2), {17, 17});
  FormField mu1(g, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.point(k);
    mu1.comp[0][k] =
        1.0 + 0.3 * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  }
  mu1 *= 1.0 / integrate_top(mu1);
  const DensityPath path = build_path([&] {
    FormField mu0(g, 2);
    for (auto& v : mu0.comp[0]) v = 1.0;
    return mu0;
  }(), mu1);
  const FormField psi = solve_psi(path, cube_atlas(g), Exec::serial);
  const TimeVectorField tvf = build_time_field(psi, path, 20);

  const FlowMap serial = integrate_flow(tvf, all_nodes(g), 20, Exec::serial);
  set_threads(4);
  const FlowMap parallel = integrate_flow(tvf, all_nodes(g), 20, Exec::openmp);
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (int a = 0; a < 2; ++a) CHECK(serial.endpoint[k][a] == parallel.endpoint[k][a]);
    CHECK(serial.det_variational[k] == parallel.det_variational[k]);
    CHECK(serial.det_finite_difference[k] == parallel.det_finite_difference[k]);
  }
}

#include <cmath>
#include <numbers>

#include "corner/verify.hpp"
#include "doctest.h"

using namespace corner;

TEST_CASE("boundary-integral identity is exact for affine data") {
  const Grid g = make_grid(Domain::cube(2), {33, 33});
  FormField xdy(g, 1);
  for (std::size_t k = 0; k < g.size(); ++k) xdy.comp[1][k] = g.point(k)[0];
  const StokesResult res = stokes_check(xdy);
  CHECK(res.lhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(res.rhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(res.residual < 1e-12);

  // y dx has the opposite orientation sign.
  FormField ydx(g, 1);
  for (std::size_t k = 0; k < g.size(); ++k) ydx.comp[0][k] = g.point(k)[1];
  const StokesResult res2 = stokes_check(ydx);
  CHECK(res2.lhs == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(res2.residual < 1e-12);
}

TEST_CASE("boundary-integral identity on the 3-cube and for interior data") {
  const Grid g3 = make_grid(Domain::cube(3), {17, 17, 17});
  FormField omega(g3, 2);
  const int ci = comp_index(3, 2, (1u << 1) | (1u << 2));  // dy^dz
  for (std::size_t k = 0; k < g3.size(); ++k) omega.comp[ci][k] = g3.point(k)[0];
  const StokesResult res = stokes_check(omega);
  CHECK(res.lhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(res.residual < 1e-12);

  // Compactly supported data: no boundary term at all.
  const Grid g = make_grid(Domain::cube(2), {33, 33});
  FormField interior(g, 1);
  const BumpSpec b = unit_bump(0.2, 0.8);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.point(k);
    interior.comp[0][k] = eval_bump(b, x[0]) * eval_bump(b, x[1]);
  }
  const StokesResult res3 = stokes_check(interior);
  CHECK(res3.rhs == 0.0);
  CHECK(std::abs(res3.lhs) < 2e-2);

  FormField top(g, 2);
  CHECK_THROWS_AS(stokes_check(top), DegreeError);
}

TEST_CASE("mollifier estimate") {
  const MollifierCheck c2 = mollifier_bound_check(2, 0.1);
  CHECK(c2.ok);
  CHECK(c2.surface_const == doctest::Approx(std::numbers::pi / 2).epsilon(1e-8));
  CHECK(c2.bound == doctest::Approx(std::numbers::pi / 2 * 0.1).epsilon(1e-8));
  CHECK(c2.multidim <= c2.bound * (1 + 1e-6));
  CHECK(c2.tail_mass < 0.1);

  const MollifierCheck c3 = mollifier_bound_check(3, 0.1);
  CHECK(c3.ok);
  CHECK(c3.surface_const == doctest::Approx(std::numbers::pi / 2).epsilon(1e-8));
  CHECK(c3.bound == doctest::Approx(std::numbers::pi / 2 * 0.01).epsilon(1e-8));

  for (double eps : {0.05, 0.1, 0.15, 0.2, 0.3})
    for (int m : {2, 3}) CHECK(mollifier_bound_check(m, eps).ok);

  CHECK_THROWS_AS(mollifier_bound_check(1, 0.1), DomainError);
  CHECK_THROWS_AS(mollifier_bound_check(2, 1.5), ParameterError);
}

TEST_CASE("top cohomology witness") {
  const Grid g = make_grid(Domain::cube(2), {33, 33});
  const Atlas atlas = cube_atlas(g);

  // Zero-integral input: the witness is the primitive operator's output.
  FormField balanced = smooth_test_form(g, 3);
  balanced -= with_grid(atlas.reference.omega, g) * integrate_top(balanced);
  const Witness w0 = cohomology_top_vanishes(balanced, atlas, Exec::serial);
  CHECK(sup_diff(w0.primitive, banyaga_cube(balanced, atlas, Exec::serial)) < 1e-14);

  // General input: d(witness) returns the form itself.
  const Witness w = cohomology_top_vanishes(smooth_test_form(g, 1), atlas, Exec::serial);
  CHECK(w.d_residual_sup < 5e-2);
  const Witness wf =
      cohomology_top_vanishes(smooth_test_form(make_grid(Domain::cube(2), {65, 65}), 1),
                              cube_atlas(make_grid(Domain::cube(2), {65, 65})), Exec::serial);
  CHECK(wf.d_residual_sup < w.d_residual_sup / 2.4);
}

TEST_CASE("relative class witness") {
  const Grid g = make_grid(Domain::cube(2), {33, 33});
  const Atlas atlas = cube_atlas(g);

  FormField a = product_bump(g, {unit_bump(0.08, 0.72), unit_bump(0.1, 0.74)});
  a *= 1.0 / integrate_top(a);
  const Witness same = relative_class_check(a, a, atlas, Exec::serial);
  CHECK(sup_norm(same.primitive) == 0.0);
  CHECK(same.d_residual_sup == 0.0);

  FormField b = product_bump(g, {unit_bump(0.28, 0.92), unit_bump(0.26, 0.9)});
  b *= 1.0 / integrate_top(b);
  const Witness w = relative_class_check(a, b, atlas, Exec::serial);
  CHECK(w.trace_residual < 1e-12);
  CHECK(w.d_residual_sup < 0.5);

  FormField heavy = a;
  heavy *= 2.0;
  CHECK_THROWS_AS(relative_class_check(a, heavy, atlas, Exec::serial), MassError);
}

TEST_CASE("convergence study harness") {
  StudyParams params;
  params.exec = Exec::serial;
  const ConvergenceReport rep = convergence_study("stokes-affine", {17, 33, 65}, params);
  CHECK(rep.exact);
  for (double r : rep.residuals) CHECK(r <= 1e-12);

  const ConvergenceReport smooth = convergence_study("stokes-smooth", {17, 33, 65}, params);
  CHECK_FALSE(smooth.exact);
  CHECK(smooth.monotone);
  CHECK(smooth.fitted_order > 1.6);
  CHECK(smooth.fitted_order < 2.4);

  CHECK_THROWS_AS(convergence_study("stokes-affine", {17, 33}, params), ConfigError);
  CHECK_THROWS_AS(convergence_study("stokes-affine", {17, 31, 65}, params), ConfigError);
  CHECK_THROWS_AS(convergence_study("nope", {17, 33, 65}, params), ConfigError);

  const ConvergenceReport fit = fit_report("demo", {9, 17, 33}, {4.0, 1.0, 2.0});
  CHECK_FALSE(fit.monotone);
  CHECK_FALSE(fit.exact);
  CHECK(fit.orders[0] == doctest::Approx(2.0));
  CHECK(fit.orders[1] == doctest::Approx(-1.0));
}

TEST_CASE("corner-flat test form vanishes on the deep strata") {
  for (const Grid& g :
       {make_grid(Domain::quadrant(2, 2), {21, 21}), make_grid(Domain::cube(2), {21, 21}),
        make_grid(Domain::cube(3), {21, 21, 21})}) {
    const FormField f = corner_flat_test_form(g, 1);
    for (const auto& s : enumerate_strata(g.domain)) {
      if (s.codim() < 2) continue;
      for (std::size_t k : stratum_nodes(g, s)) CHECK(std::abs(f.comp[0][k]) < 1e-13);
    }
  }
}

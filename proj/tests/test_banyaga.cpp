#include <cmath>

#include "corner/banyaga.hpp"
#include "corner/verify.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace corner;

namespace {

std::vector<double> normalized_values(const Grid& g, int axis, const BumpSpec& spec) {
  std::vector<double> v(g.n[axis]);
  for (int i = 0; i < g.n[axis]; ++i) v[i] = eval_bump(spec, g.coord(axis, i));
  const double mass = oracles::trapz(v, g.spacing[axis]);
  for (auto& x : v) x /= mass;
  return v;
}

}  // namespace

TEST_CASE("1d primitive: zero and reference inputs") {
  const Grid g = make_grid(Domain::quadrant(1, 1), {65});
  const BumpSpec gb = unit_bump(0.2, 0.8);

  FormField zero(g, 1);
  CHECK(sup_norm(banyaga_1d(zero, gb, 1)) == 0.0);

  FormField omega(g, 1);
  omega.comp[0] = normalized_values(g, 0, gb);
  CHECK(sup_norm(banyaga_1d(omega, gb, 1)) < 1e-14);
}

TEST_CASE("1d primitive against the cumulative quadrature oracle") {
  const Grid g = make_grid(Domain::quadrant(1, 1), {129});
  const BumpSpec gb = unit_bump(0.2, 0.8);
  const int n = g.n[0];
  const double h = g.spacing[0];

  FormField alpha(g, 1);
  for (int i = 0; i < n; ++i) alpha.comp[0][i] = 2.0 * g.coord(0, i);
  const FormField I = banyaga_1d(alpha, gb, 1);

  // Oracle: I(u) = cum(2t) - cum(g) * trapz(2t), all by plain running sums.
  const auto gv = normalized_values(g, 0, gb);
  const double total = oracles::trapz(alpha.comp[0], h);
  const auto cum_a = oracles::cumtrapz(alpha.comp[0], h);
  const auto cum_g = oracles::cumtrapz(gv, h);
  for (int i = 0; i < n; ++i)
    CHECK(I.comp[0][i] == doctest::Approx(cum_a[i] - cum_g[i] * total).epsilon(1e-13));

  CHECK(I.comp[0][0] == 0.0);
  CHECK(std::abs(I.comp[0][n - 1]) < 1e-12);  // u^2 - G(u) vanishes at both ends
}

TEST_CASE("1d primitive support handling for the full line") {
  const Grid g = make_grid(Domain::quadrant(1, 0), {65});
  FormField alpha(g, 1);
  for (int i = 0; i < g.n[0]; ++i) alpha.comp[0][i] = 1.0;  // nonzero at truncation
  CHECK_THROWS_AS(banyaga_1d(alpha, unit_bump(-0.5, 0.5), 0), SupportError);
  CHECK_THROWS_AS(banyaga_1d(alpha, unit_bump(-0.5, 0.5), 2), DomainError);
}

TEST_CASE("auxiliary operator against a slice-by-slice oracle") {
  const Grid g = make_grid(Domain::quadrant(2, 2), {33, 33});
  const ReferenceForm ref = default_reference(g);
  const FormField alpha = smooth_test_form(g, 4);
  const FormField got = banyaga_aux(alpha, ref, 2, Exec::serial);

  const int nx = g.n[0], ny = g.n[1];
  const double hx = g.spacing[0], hy = g.spacing[1];
  const auto g0 = normalized_values(g, 0, ref.axis_bumps[0]);
  const auto g1 = normalized_values(g, 1, ref.axis_bumps[1]);

  std::vector<double> slice_mass(ny, 0.0);
  std::vector<double> dy_comp(g.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    std::vector<double> row(nx);
    for (int i = 0; i < nx; ++i) row[i] = alpha.comp[0][j * nx + i];
    slice_mass[j] = oracles::trapz(row, hx);
    std::vector<double> integrand(nx);
    for (int i = 0; i < nx; ++i) integrand[i] = row[i] - g0[i] * slice_mass[j];
    const auto cum = oracles::cumtrapz(integrand, hx);
    for (int i = 0; i < nx; ++i) dy_comp[j * nx + i] = cum[i];
  }
  const double total = oracles::trapz(slice_mass, hy);
  std::vector<double> f(ny);
  for (int j = 0; j < ny; ++j) f[j] = slice_mass[j] - g1[j] * total;
  const auto cumF = oracles::cumtrapz(f, hy);

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      CHECK(got.comp[1][j * nx + i] == doctest::Approx(dy_comp[j * nx + i]).epsilon(1e-12));
      CHECK(got.comp[0][j * nx + i] ==
            doctest::Approx(-g0[i] * cumF[j]).epsilon(1e-12));
    }
}

TEST_CASE("auxiliary operator annihilates the reference form") {
  const Grid g = make_grid(Domain::quadrant(2, 2), {33, 33});
  const ReferenceForm ref = default_reference(g);
  CHECK(sup_norm(banyaga_aux(ref.omega, ref, 2, Exec::serial)) < 1e-13);
  FormField zero(g, 2);
  CHECK(sup_norm(banyaga_aux(zero, ref, 2, Exec::serial)) == 0.0);
}

TEST_CASE("corner correction reduces to the auxiliary operator when the base slice vanishes") {
  const Grid g = make_grid(Domain::quadrant(2, 2), {33, 33});
  const ReferenceForm ref = default_reference(g);
  FormField alpha = smooth_test_form(g, 4);
  const int nx = g.n[0];
  for (int i = 0; i < nx; ++i) alpha.comp[0][i] = 0.0;  // kill the u^m = 0 slice
  const BumpSpec h = cutoff(0.25, 0.75);
  const FormField corr = corner_correction(alpha, ref, h, Exec::serial);
  const FormField aux = banyaga_aux(alpha, ref, 2, Exec::serial);
  CHECK(sup_diff(corr, aux) == 0.0);

  // Reference form also has a vanishing base slice.
  CHECK(sup_norm(corner_correction(ref.omega, ref, h, Exec::serial)) < 1e-13);
}

TEST_CASE("corner correction requires p = m") {
  const Grid g = make_grid(Domain::quadrant(2, 1), {33, 33});
  const ReferenceForm ref = default_reference(g);
  const FormField alpha = smooth_test_form(g, 4);
  CHECK_THROWS_AS(corner_correction(alpha, ref, cutoff(0.25, 0.75), Exec::serial), DomainError);
}

TEST_CASE("quadrant operator residual suite across p") {
  for (int p : {0, 1, 2}) {
    const Grid g = make_grid(Domain::quadrant(2, p), {33, 33});
    const OperatorCheck chk = operator_check_quadrant(g, 1, Exec::serial);
    CAPTURE(p);
    CHECK(chk.identity_sup < 3e-2);
    CHECK(chk.trace_sup < 1e-13);
    CHECK(chk.linearity_sup < 1e-12);
    CHECK(chk.support_leak < 1e-10);
    CHECK(chk.boundary_sup < 1e-12);
  }
  // identity residual drops at least quadratically-ish under one refinement
  const double r33 =
      operator_check_quadrant(make_grid(Domain::quadrant(2, 2), {33, 33}), 1, Exec::serial)
          .identity_sup;
  const double r65 =
      operator_check_quadrant(make_grid(Domain::quadrant(2, 2), {65, 65}), 1, Exec::serial)
          .identity_sup;
  CHECK(r65 < r33 / 2.4);
}

TEST_CASE("operator identity in one dimension") {
  const OperatorCheck q =
      operator_check_quadrant(make_grid(Domain::quadrant(1, 1), {65}), 1, Exec::serial);
  CHECK(q.identity_sup < 5e-3);
  CHECK(q.trace_sup < 1e-13);
  const OperatorCheck line =
      operator_check_quadrant(make_grid(Domain::quadrant(1, 0), {65}), 1, Exec::serial);
  CHECK(line.identity_sup < 5e-3);
  CHECK(line.support_leak < 1e-10);
  const OperatorCheck c = operator_check_cube(make_grid(Domain::cube(1), {65}), 1, Exec::serial);
  CHECK(c.identity_sup < 5e-3);
  CHECK(c.trace_sup < 1e-13);
}

TEST_CASE("quadrant operator in three dimensions") {
  const Grid g = make_grid(Domain::quadrant(3, 3), {21, 21, 21});
  const OperatorCheck chk = operator_check_quadrant(g, 1, Exec::serial);
  CHECK(chk.identity_sup < 6e-2);
  CHECK(chk.trace_sup < 1e-13);
  CHECK(chk.boundary_sup < 1e-12);

  // Q^3_2: a free last axis on top of a clamped pair; the clamped pair must
  // share the lattice and the reference factor even though p < m.
  const Grid q32 = make_grid(Domain::quadrant(3, 2), {21, 21, 21});
  const OperatorCheck chk2 = operator_check_quadrant(q32, 1, Exec::serial);
  CHECK(chk2.identity_sup < 6e-2);
  CHECK(chk2.trace_sup < 1e-13);

  // Mismatched lattice on the clamped pair is rejected up front.
  const Grid skewed = make_grid(Domain::quadrant(3, 2, {1.0, 2.0, 1.0}), {21, 21, 21});
  const ReferenceForm bad = default_reference(skewed);
  CHECK_THROWS_AS(banyaga_quadrant(smooth_test_form(skewed, 1), bad, 2, Exec::serial),
                  DomainError);
}

TEST_CASE("quadrant operator rejects bad inputs") {
  const Grid g = make_grid(Domain::quadrant(2, 0), {33, 33});
  const ReferenceForm ref = default_reference(g);
  FormField ones(g, 2);
  for (auto& v : ones.comp[0]) v = 1.0;
  CHECK_THROWS_AS(banyaga_quadrant(ones, ref, 0, Exec::serial), SupportError);
  CHECK_THROWS_AS(banyaga_quadrant(smooth_test_form(g, 1), ref, 1, Exec::serial), DomainError);
}

TEST_CASE("operator is zero on zero and drops the mass term for balanced input") {
  const Grid g = make_grid(Domain::quadrant(2, 2), {33, 33});
  const ReferenceForm ref = default_reference(g);
  FormField zero(g, 2);
  CHECK(sup_norm(banyaga_quadrant(zero, ref, 2, Exec::serial)) == 0.0);

  FormField alpha = smooth_test_form(g, 2);
  alpha -= ref.omega * integrate_top(alpha);  // now integral(alpha) == 0
  CHECK(std::abs(integrate_top(alpha)) < 1e-14);
  const FormField I = banyaga_quadrant(alpha, ref, 2, Exec::serial);
  CHECK(sup_diff(exterior_derivative(I), alpha) < 3e-2);
}

TEST_CASE("changing the reference form") {
  const Grid g = make_grid(Domain::quadrant(2, 2), {33, 33});
  const ReferenceForm ref = default_reference(g);
  const ReferenceForm other =
      make_reference(g, {unit_bump(0.2, 0.8), unit_bump(0.2, 0.8)});
  const FormField alpha = smooth_test_form(g, 2);
  const double total = integrate_top(alpha);

  const FormField I_alpha = banyaga_quadrant(alpha, ref, 2, Exec::serial);
  const FormField I_other = banyaga_quadrant(other.omega, ref, 2, Exec::serial);

  // Same reference: correction term is the operator's own reference image.
  const FormField same = change_reference(
      I_alpha, banyaga_quadrant(ref.omega, ref, 2, Exec::serial), total);
  CHECK(sup_diff(same, I_alpha) < 1e-12);

  // Zero-mass input: unchanged no matter the new reference.
  FormField balanced = alpha;
  balanced -= ref.omega * total;
  const FormField I_bal = banyaga_quadrant(balanced, ref, 2, Exec::serial);
  CHECK(sup_diff(change_reference(I_bal, I_other, integrate_top(balanced)), I_bal) < 1e-13);

  // d of the changed primitive matches the new reference's identity.
  const FormField changed = change_reference(I_alpha, I_other, total);
  FormField target = alpha;
  target -= other.omega * total;
  CHECK(sup_diff(exterior_derivative(changed), target) < 5e-2);
}

TEST_CASE("cube atlas construction") {
  const Grid line = make_grid(Domain::cube(1), {17});
  const Atlas a1 = cube_atlas(line);
  CHECK(a1.charts.size() == 2);
  CHECK_FALSE(a1.charts[0].reflect[0]);
  CHECK(a1.charts[1].reflect[0]);
  for (std::size_t k = 0; k < line.size(); ++k) {
    double sum = 0;
    for (const auto& lam : a1.partition) {
      CHECK(lam.values[k] >= 0.0);
      sum += lam.values[k];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }

  const Grid sq = make_grid(Domain::cube(2), {33, 33});
  const Atlas a2 = cube_atlas(sq);
  CHECK(a2.charts.size() == 4);
  for (std::size_t k = 0; k < sq.size(); ++k) {
    double sum = 0;
    for (const auto& lam : a2.partition) sum += lam.values[k];
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }

  // Reference form pulled into each chart keeps a two-cell interior margin.
  for (const auto& chart : a2.charts) {
    const FormField pulled = pullback_chart(chart, with_grid(a2.reference.omega, sq));
    for (std::size_t k = 0; k < sq.size(); ++k) {
      const auto idx = sq.unindex(k);
      const bool margin = idx[0] <= 2 || idx[0] >= 30 || idx[1] <= 2 || idx[1] >= 30;
      if (margin) CHECK(pulled.comp[0][k] == 0.0);
    }
  }

  CHECK_THROWS_AS(cube_atlas(sq, 0.6), DomainError);
  CHECK_THROWS_AS(cube_atlas(sq, 0.45, 0.5), DomainError);
  CHECK_THROWS_AS(cube_atlas(make_grid(Domain::quadrant(2, 2), {33, 33})), DomainError);
}

TEST_CASE("glued operator against a two-chart oracle in one dimension") {
  const Grid g = make_grid(Domain::cube(1), {41});
  const Atlas atlas = cube_atlas(g);
  const int n = g.n[0];
  const double h = g.spacing[0];

  FormField alpha(g, 1);
  for (int i = 0; i < n; ++i) {
    const double x = g.coord(0, i);
    alpha.comp[0][i] = 0.7 + 0.4 * std::sin(3.0 * x) - 0.2 * x;
  }
  const FormField got = banyaga_cube(alpha, atlas, Exec::serial);

  const auto gv = normalized_values(g, 0, atlas.reference.axis_bumps[0]);
  const auto& lam0 = atlas.partition[0].values;
  const auto& lam1 = atlas.partition[1].values;

  // Chart 0 is the identity.
  std::vector<double> a0(n);
  for (int i = 0; i < n; ++i) a0[i] = lam0[i] * alpha.comp[0][i];
  const double t0 = oracles::trapz(a0, h);
  std::vector<double> f0(n);
  for (int i = 0; i < n; ++i) f0[i] = a0[i] - gv[i] * t0;
  const auto i0 = oracles::cumtrapz(f0, h);

  // Chart 1 reflects; the pulled-back 1-form flips sign, the reference is
  // symmetric, and the resulting 0-form is read back mirrored.
  std::vector<double> a1(n);
  for (int i = 0; i < n; ++i) a1[i] = -lam1[n - 1 - i] * alpha.comp[0][n - 1 - i];
  const double t1 = oracles::trapz(a1, h);
  std::vector<double> f1(n);
  for (int i = 0; i < n; ++i) f1[i] = a1[i] - gv[i] * t1;
  const auto i1 = oracles::cumtrapz(f1, h);

  for (int i = 0; i < n; ++i)
    CHECK(got.comp[0][i] == doctest::Approx(i0[i] + i1[n - 1 - i]).epsilon(1e-12));

  // Relative-form property at the two boundary points, and the identity.
  CHECK(std::abs(got.comp[0][0]) < 1e-14);
  CHECK(std::abs(got.comp[0][n - 1]) < 1e-14);
}

TEST_CASE("glued operator on the square") {
  const Grid g = make_grid(Domain::cube(2), {33, 33});
  const Atlas atlas = cube_atlas(g);

  // The atlas reference itself maps to (numerically) zero.
  FormField omega_cube = with_grid(atlas.reference.omega, g);
  const FormField I_omega = banyaga_cube(omega_cube, atlas, Exec::serial);
  CHECK(sup_norm(I_omega) < 2e-3);
  CHECK(sup_norm(exterior_derivative(I_omega)) < 3e-2);

  // dI(alpha) = alpha - omega for the unit-mass volume form; the residual
  // constant is larger than for the small-mass test forms but refines the
  // same way.
  FormField vol(g, 2);
  for (auto& v : vol.comp[0]) v = 1.0;
  const FormField I_vol = banyaga_cube(vol, atlas, Exec::serial);
  FormField target = vol;
  target -= omega_cube;
  const double vol_res = sup_diff(exterior_derivative(I_vol), target);
  CHECK(vol_res < 0.2);
  CHECK(trace_sup(I_vol) < 1e-13);
  {
    const Grid g65 = make_grid(Domain::cube(2), {65, 65});
    const Atlas atlas65 = cube_atlas(g65);
    FormField vol65(g65, 2);
    for (auto& v : vol65.comp[0]) v = 1.0;
    FormField target65 = vol65;
    target65 -= with_grid(atlas65.reference.omega, g65);
    const double finer =
        sup_diff(exterior_derivative(banyaga_cube(vol65, atlas65, Exec::serial)), target65);
    CHECK(finer < vol_res / 2.2);
  }

  const OperatorCheck chk = operator_check_cube(g, 1, Exec::serial);
  CHECK(chk.identity_sup < 5e-2);
  CHECK(chk.trace_sup < 1e-13);
  CHECK(chk.boundary_sup < 1e-12);
  CHECK(chk.linearity_sup < 1e-12);

  const double finer =
      operator_check_cube(make_grid(Domain::cube(2), {65, 65}), 1, Exec::serial).identity_sup;
  CHECK(finer < chk.identity_sup / 2.4);
}

TEST_CASE("glued operator on the 3-cube") {
  const OperatorCheck coarse =
      operator_check_cube(make_grid(Domain::cube(3), {17, 17, 17}), 1, Exec::serial);
  CHECK(coarse.identity_sup < 0.5);
  CHECK(coarse.trace_sup < 1e-13);
  CHECK(coarse.boundary_sup < 1e-12);
  CHECK(coarse.linearity_sup < 1e-12);
  const OperatorCheck fine =
      operator_check_cube(make_grid(Domain::cube(3), {33, 33, 33}), 1, Exec::serial);
  CHECK(fine.identity_sup < coarse.identity_sup / 2.2);
}

TEST_CASE("reference form validation") {
  const Grid g = make_grid(Domain::cube(1), {9});
  CHECK_THROWS_AS(make_reference(g, {unit_bump(0.05, 0.95)}), SupportError);
  CHECK_THROWS_AS(make_reference(g, {cutoff(0.2, 0.8)}), ConfigError);
  CHECK_THROWS_AS(make_reference(g, {unit_bump(0.3, 0.7), unit_bump(0.3, 0.7)}), ConfigError);
}

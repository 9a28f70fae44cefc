#include "corner/verify.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

namespace corner {

namespace {

double simpson_fn(double lo, double hi, int intervals, const std::function<double(double)>& f) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

StokesResult stokes_check(const FormField& omega) {
  const int m = omega.m();
  if (omega.degree != m - 1) throw DegreeError("stokes_check: omega must have degree m-1");
  StokesResult res;
  res.lhs = integrate_top(exterior_derivative(omega));
  for (const auto& face : codim1_faces(omega.grid.domain)) {
    const auto& c = face.constraints[0];
    const FormField tr = trace_on_stratum(omega, face);
    const double sign = (c.high ? 1.0 : -1.0) * (c.axis % 2 == 0 ? 1.0 : -1.0);
    res.rhs += sign * integrate_top(tr);
  }
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

MollifierCheck mollifier_bound_check(int m, double eps, double rel_tol) {
  if (m != 2 && m != 3) throw DomainError("mollifier_bound_check: m must be 2 or 3");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("mollifier_bound_check: eps in (0,1)");
  const BumpSpec f = mollifier(eps);

  MollifierCheck chk;
  chk.m = m;
  chk.eps = eps;

  const double pi = std::numbers::pi;
  if (m == 2) {
    // Quarter-circle length from the parametrized speed.
    chk.surface_const = simpson_fn(0.0, pi / 2.0, 2000, [](double th) {
      const double dx = -std::sin(th), dy = std::cos(th);
      return std::sqrt(dx * dx + dy * dy);
    });
  } else {
    // Octant patch of the unit sphere: iterated polar quadrature.
    chk.surface_const = simpson_fn(0.0, pi / 2.0, 2000, [&](double th) {
      return std::sin(th) * (pi / 2.0);
    });
  }

  // Tensor Simpson of f'(|x|) over [0, eps]^m (the integrand vanishes beyond).
  const int nodes = 161;
  const double h = eps / (nodes - 1);
  std::vector<double> w(nodes, 0.0);
  for (int i = 1; i < nodes - 1; ++i) w[i] = (i % 2 ? 4.0 : 2.0) * h / 3.0;
  w[0] = w[nodes - 1] = h / 3.0;
  double multi = 0.0;
  if (m == 2) {
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j) {
        const double r = std::hypot(i * h, j * h);
        multi += w[i] * w[j] * bump_derivative(f, r);
      }
  } else {
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j)
        for (int k = 0; k < nodes; ++k) {
          const double r = std::sqrt(i * h * i * h + j * h * j * h + k * h * k * h);
          multi += w[i] * w[j] * w[k] * bump_derivative(f, r);
        }
  }
  chk.multidim = std::abs(multi);

  chk.radial = chk.surface_const *
               std::abs(simpson_fn(0.0, eps, 20000, [&](double r) {
                 return bump_derivative(f, r) * std::pow(r, m - 1);
               }));
  chk.parts = chk.surface_const * simpson_fn(0.0, eps, 20000, [&](double r) {
                return eval_bump(f, r) * (m - 1) * std::pow(r, m - 2);
              });
  chk.bound = chk.surface_const * std::pow(eps, m - 1);
  chk.tail_mass = bump_mass(f);

  const double tol = rel_tol * chk.bound;
  chk.ok = chk.multidim <= chk.bound * (1.0 + rel_tol) && std::abs(chk.multidim - chk.radial) <= tol &&
           std::abs(chk.radial - chk.parts) <= tol && chk.parts <= chk.bound * (1.0 + rel_tol) &&
           chk.tail_mass < eps;
  return chk;
}

Witness cohomology_top_vanishes(const FormField& alpha, const Atlas& atlas, Exec exec) {
  const int m = alpha.m();
  if (alpha.degree != m) throw DegreeError("cohomology_top_vanishes: needs a top form");
  const Grid& grid = alpha.grid;

  // Auxiliary (m-1)-form u^1 du^2^...^du^m with unit boundary integral.
  FormField aux(grid, m - 1);
  const unsigned mask = ((1u << m) - 1u) & ~1u;
  const int ci = comp_index(m, m - 1, mask);
  for (std::size_t k = 0; k < grid.size(); ++k) aux.comp[ci][k] = grid.point(k)[0];

  const FormField d_aux = exterior_derivative(aux);
  const double c = integrate_top(d_aux);
  FormField reference_primitive = aux - banyaga_cube(d_aux, atlas, exec);
  reference_primitive *= 1.0 / c;

  Witness w;
  w.primitive = banyaga_cube(alpha, atlas, exec) + reference_primitive * integrate_top(alpha);
  w.d_residual_sup = sup_diff(exterior_derivative(w.primitive), alpha);
  w.trace_residual = 0.0;  // the witness is not required to be relative
  return w;
}

Witness relative_class_check(const FormField& alpha, const FormField& beta, const Atlas& atlas,
                             Exec exec) {
  const double ia = integrate_top(alpha), ib = integrate_top(beta);
  if (std::abs(ia - ib) > 1e-8)
    throw MassError("relative_class_check: integrals differ beyond 1e-8");
  Witness w;
  w.primitive = banyaga_cube(alpha, atlas, exec) - banyaga_cube(beta, atlas, exec);
  w.d_residual_sup = sup_diff(exterior_derivative(w.primitive), alpha - beta);
  w.trace_residual = trace_sup(w.primitive);
  return w;
}

FormField smooth_test_form(const Grid& grid, unsigned seed) {
  const int m = grid.m();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  const double c0 = 0.6 + 0.4 * uni(rng);
  std::array<double, 3> phase{0, 0, 0}, amp_cos{0, 0, 0};
  std::array<int, 3> freq{1, 1, 1};
  for (int a = 0; a < m; ++a) {
    phase[a] = (uni(rng) + 0.5) * std::numbers::pi;
    amp_cos[a] = 0.8 * uni(rng);
    freq[a] = 1 + (rng() % 2);
  }

  FormField out(grid, m);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.point(k);
    double envelope = 1.0;
    double prod = 1.0, sum = 0.0;
    for (int a = 0; a < m; ++a) {
      const double lo = grid.domain.lo(a), hi = grid.domain.hi(a);
      const double span = hi - lo;
      const double xi = (x[a] - lo) / span;
      prod *= std::sin(std::numbers::pi * xi + phase[a]);
      sum += amp_cos[a] * std::cos(std::numbers::pi * freq[a] * xi);
      if (grid.domain.kind == DomainKind::quadrant) {
        // Vanish near truncation faces; clamped sides stay unconstrained.
        if (grid.domain.clamped_low(a)) {
          envelope *= eval_bump(cutoff(0.35 * span, 0.85 * span), x[a] - lo);
        } else {
          const double half = 0.5 * span;
          envelope *= eval_bump(cutoff(0.35 * half, 0.85 * half), std::abs(x[a] - lo - half));
        }
      }
    }
    out.comp[0][k] = 0.3 * envelope * (c0 + prod + sum);
  }
  return out;
}

FormField corner_flat_test_form(const Grid& grid, unsigned seed) {
  FormField out = smooth_test_form(grid, seed);
  const int m = grid.m();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.point(k);
    std::array<double, 3> wall{1.0, 1.0, 1.0};
    for (int a = 0; a < m; ++a) {
      const double lo = grid.domain.lo(a), hi = grid.domain.hi(a);
      const double xi = (x[a] - lo) / (hi - lo);
      if (grid.domain.clamped_low(a) && grid.domain.clamped_high(a))
        wall[a] = xi * (1.0 - xi);
      else if (grid.domain.clamped_low(a))
        wall[a] = xi;
    }
    double flat = 0.0;
    for (int a = 0; a < m; ++a) {
      double prod = 1.0;
      for (int b = 0; b < m; ++b)
        if (b != a) prod *= wall[b];
      flat += prod;
    }
    if (m == 1) flat = 1.0;
    out.comp[0][k] *= flat;
  }
  return out;
}

OperatorCheck operator_check_quadrant(const Grid& grid, unsigned seed, Exec exec) {
  const ReferenceForm ref = default_reference(grid);
  const int p = grid.domain.p;
  const FormField alpha = smooth_test_form(grid, seed);
  const FormField beta = smooth_test_form(grid, seed + 7);

  OperatorCheck chk;
  const FormField I_alpha = banyaga_quadrant(alpha, ref, p, exec);
  FormField target = alpha;
  target -= ref.omega * integrate_top(alpha);
  chk.identity_sup = sup_diff(exterior_derivative(I_alpha), target);
  chk.trace_sup = trace_sup(I_alpha);

  const FormField I_flat = banyaga_quadrant(corner_flat_test_form(grid, seed), ref, p, exec);
  chk.boundary_sup = boundary_sup(I_flat);

  FormField combo = alpha;
  combo += beta * 2.0;
  FormField lin = banyaga_quadrant(combo, ref, p, exec);
  lin -= I_alpha;
  lin -= banyaga_quadrant(beta, ref, p, exec) * 2.0;
  chk.linearity_sup = sup_norm(lin);

  const Grid& g = grid;
  for (int axis = 0; axis < g.m(); ++axis)
    for (int side = 0; side < 2; ++side) {
      const bool trunc = side == 0 ? g.domain.truncated_low(axis) : g.domain.truncated_high(axis);
      if (!trunc) continue;
      const int fixed = side == 0 ? 0 : g.n[axis] - 1;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.unindex(k)[axis] != fixed) continue;
        for (const auto& c : I_alpha.comp)
          chk.support_leak = std::max(chk.support_leak, std::abs(c[k]));
      }
    }
  return chk;
}

OperatorCheck operator_check_cube(const Grid& grid, unsigned seed, Exec exec) {
  const Atlas atlas = cube_atlas(grid);
  const FormField alpha = smooth_test_form(grid, seed);
  const FormField beta = smooth_test_form(grid, seed + 7);

  OperatorCheck chk;
  const FormField I_alpha = banyaga_cube(alpha, atlas, exec);
  FormField target = alpha;
  target -= with_grid(atlas.reference.omega, grid) * integrate_top(alpha);
  chk.identity_sup = sup_diff(exterior_derivative(I_alpha), target);
  chk.trace_sup = trace_sup(I_alpha);

  const FormField I_flat = banyaga_cube(corner_flat_test_form(grid, seed), atlas, exec);
  chk.boundary_sup = boundary_sup(I_flat);

  FormField combo = alpha;
  combo += beta * 2.0;
  FormField lin = banyaga_cube(combo, atlas, exec);
  lin -= I_alpha;
  lin -= banyaga_cube(beta, atlas, exec) * 2.0;
  chk.linearity_sup = sup_norm(lin);
  return chk;
}

namespace {

double phi_exact_1d(double u) { return (-1.0 + std::sqrt(1.0 + 8.0 * u)) / 2.0; }

FormField constant_density(const Grid& grid, double value) {
  FormField mu(grid, grid.m());
  for (auto& v : mu.comp[0]) v = value;
  return mu;
}

FormField normalized(FormField mu) {
  const double mass = integrate_top(mu);
  mu *= 1.0 / mass;
  return mu;
}

double study_residual(const std::string& name, int n, const StudyParams& params) {
  if (name == "banyaga-q22") {
    const Grid grid = make_grid(Domain::quadrant(2, 2), {n, n});
    return operator_check_quadrant(grid, params.seed, params.exec).identity_sup;
  }
  if (name == "banyaga-square") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    return operator_check_cube(grid, params.seed, params.exec).identity_sup;
  }
  if (name == "corner-vanishing") {
    const Grid grid = make_grid(Domain::quadrant(2, 2), {n, n});
    return operator_check_quadrant(grid, params.seed, params.exec).boundary_sup;
  }
  if (name == "corner-vanishing-square") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    return operator_check_cube(grid, params.seed, params.exec).boundary_sup;
  }
  if (name == "stokes-affine") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    FormField omega(grid, 1);
    for (std::size_t k = 0; k < grid.size(); ++k) omega.comp[1][k] = grid.point(k)[0];
    return stokes_check(omega).residual;
  }
  if (name == "stokes-smooth") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    FormField omega(grid, 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto x = grid.point(k);
      omega.comp[0][k] = 0.4 * std::sin(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]);
      omega.comp[1][k] = 0.3 * std::exp(0.5 * x[0] * x[1]);
    }
    return stokes_check(omega).residual;
  }
  if (name == "moser-1d") {
    const Grid grid = make_grid(Domain::cube(1), {n});
    const DensityPath path = build_path(constant_density(grid, 1.0), [&] {
      FormField mu(grid, 1);
      for (std::size_t k = 0; k < grid.size(); ++k) mu.comp[0][k] = 0.5 + grid.point(k)[0];
      return mu;
    }());
    const Atlas atlas = cube_atlas(grid);
    const FormField psi = solve_psi(path, atlas, params.exec);
    const int steps = params.rk_steps > 0 ? params.rk_steps : n - 1;
    const TimeVectorField tvf = build_time_field(psi, path, steps);
    const FlowMap flow = integrate_flow(tvf, all_nodes(grid), steps, params.exec);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      err = std::max(err, std::abs(flow.endpoint[k][0] - phi_exact_1d(grid.point(k)[0])));
    return err;
  }
  if (name == "moser-2d") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    FormField mu1(grid, 2);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto x = grid.point(k);
      mu1.comp[0][k] = 1.0 + 0.3 * std::sin(std::numbers::pi * x[0]) *
                                 std::sin(std::numbers::pi * x[1]);
    }
    const DensityPath path = build_path(constant_density(grid, 1.0), normalized(mu1));
    const Atlas atlas = cube_atlas(grid);
    const FormField psi = solve_psi(path, atlas, params.exec);
    const int steps = params.rk_steps > 0 ? params.rk_steps : 100;
    const TimeVectorField tvf = build_time_field(psi, path, steps);
    const FlowMap flow = integrate_flow(tvf, all_nodes(grid), steps, params.exec);
    return pullback_residual(flow, path).sup;
  }
  if (name == "boundary-displacement") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    FormField mu1(grid, 2);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto x = grid.point(k);
      mu1.comp[0][k] = 1.0 + 0.3 * std::sin(std::numbers::pi * x[0]) *
                                 std::sin(2.0 * std::numbers::pi * x[1]);
    }
    const DensityPath path = build_path(constant_density(grid, 1.0), mu1);
    const Atlas atlas = cube_atlas(grid);
    const FormField psi = solve_psi(path, atlas, params.exec);
    const int steps = params.rk_steps > 0 ? params.rk_steps : 100;
    const TimeVectorField tvf = build_time_field(psi, path, steps);
    const FlowMap flow = integrate_flow(tvf, boundary_nodes(grid), steps, params.exec);
    return boundary_identity_check(flow, path).max_displacement;
  }
  if (name == "cohomology-abs") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    const Atlas atlas = cube_atlas(grid);
    return cohomology_top_vanishes(smooth_test_form(grid, params.seed), atlas, params.exec)
        .d_residual_sup;
  }
  if (name == "cohomology-rel") {
    const Grid grid = make_grid(Domain::cube(2), {n, n});
    const Atlas atlas = cube_atlas(grid);
    FormField a = normalized(product_bump(grid, {unit_bump(0.08, 0.72), unit_bump(0.1, 0.74)}));
    FormField b = normalized(product_bump(grid, {unit_bump(0.28, 0.92), unit_bump(0.26, 0.9)}));
    return relative_class_check(a, b, atlas, params.exec).d_residual_sup;
  }
  std::string known;
  for (const auto& s : convergence_studies()) known += (known.empty() ? "" : ", ") + s;
  throw ConfigError("unknown convergence study '" + name + "' (available: " + known + ")");
}

}  // namespace

std::vector<std::string> convergence_studies() {
  return {"banyaga-q22",   "banyaga-square", "corner-vanishing", "corner-vanishing-square",
          "stokes-affine", "stokes-smooth",  "moser-1d",         "moser-2d",
          "boundary-displacement", "cohomology-abs", "cohomology-rel"};
}

ConvergenceReport fit_report(const std::string& study, const std::vector<int>& grids,
                             const std::vector<double>& residuals) {
  ConvergenceReport rep;
  rep.study = study;
  rep.grids = grids;
  rep.residuals = residuals;
  rep.exact = true;
  for (double r : residuals)
    if (r > 1e-12) rep.exact = false;
  double sum = 0.0;
  int count = 0;
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k) {
    if (residuals[k + 1] >= residuals[k]) rep.monotone = false;
    double order = 0.0;
    if (residuals[k] > 0.0 && residuals[k + 1] > 0.0)
      order = std::log2(residuals[k] / residuals[k + 1]);
    rep.orders.push_back(order);
    sum += order;
    ++count;
  }
  rep.fitted_order = count ? sum / count : 0.0;
  return rep;
}

ConvergenceReport convergence_study(const std::string& name, const std::vector<int>& grids,
                                    const StudyParams& params) {
  if (grids.size() < 3) throw ConfigError("convergence_study: need at least 3 grids");
  for (std::size_t k = 0; k + 1 < grids.size(); ++k)
    if (grids[k + 1] - 1 != 2 * (grids[k] - 1))
      throw ConfigError("convergence_study: each grid must refine the last by 2x");
  std::vector<double> residuals;
  for (int n : grids) residuals.push_back(study_residual(name, n, params));
  return fit_report(name, grids, residuals);
}

}  // namespace corner

#include "corner/moser.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace corner {

namespace {

int eta_component_index(int m, int axis) {
  const unsigned full = (1u << m) - 1u;
  return comp_index(m, m - 1, full & ~(1u << axis));
}

double eta_sign(int axis) { return (axis % 2 == 0) ? -1.0 : 1.0; }  // -(-1)^axis

double det_m(const std::array<double, 9>& j, int m) {
  if (m == 1) return j[0];
  if (m == 2) return j[0] * j[4] - j[1] * j[3];
  return j[0] * (j[4] * j[8] - j[5] * j[7]) - j[1] * (j[3] * j[8] - j[5] * j[6]) +
         j[2] * (j[3] * j[7] - j[4] * j[6]);
}

void clamp_point(const Grid& g, std::array<double, 3>& x) {
  for (int a = 0; a < g.m(); ++a) {
    if (x[a] < g.domain.lo(a)) x[a] = g.domain.lo(a);
    if (x[a] > g.domain.hi(a)) x[a] = g.domain.hi(a);
  }
}

}  // namespace

DensityPath build_path(const FormField& mu0, const FormField& mu1) {
  const int m = mu0.m();
  if (mu0.degree != m || mu1.degree != m)
    throw DegreeError("build_path: densities must be top forms");
  if (!mu0.grid.same_lattice(mu1.grid)) throw DomainError("build_path: grids differ");
  for (std::size_t k = 0; k < mu0.comp[0].size(); ++k) {
    if (!(mu0.comp[0][k] > 0.0))
      throw PositivityError("build_path: mu0 is not positive at node " + std::to_string(k));
    if (!(mu1.comp[0][k] > 0.0))
      throw PositivityError("build_path: mu1 is not positive at node " + std::to_string(k));
  }
  const double m0 = integrate_top(mu0);
  const double m1 = integrate_top(mu1);
  if (std::abs(m1 - m0) > 1e-6 * std::abs(m0))
    throw MassError("build_path: masses differ beyond the renormalization policy");
  DensityPath path;
  path.grid = mu0.grid;
  path.rho0 = ScalarField(mu0.grid);
  path.rho0.values = mu0.comp[0];
  path.rho1 = ScalarField(mu1.grid);
  path.rho1.values = mu1.comp[0];
  path.renormalization = m0 / m1;
  for (auto& v : path.rho1.values) v *= path.renormalization;
  path.mass = m0;
  return path;
}

namespace {

FormField density_gap(const DensityPath& path) {
  FormField gap(path.grid, path.grid.m());
  for (std::size_t k = 0; k < gap.comp[0].size(); ++k)
    gap.comp[0][k] = path.rho1.values[k] - path.rho0.values[k];
  return gap;
}

}  // namespace

FormField solve_psi(const DensityPath& path, const Atlas& atlas, Exec exec) {
  return banyaga_cube(density_gap(path), atlas, exec);
}

FormField solve_psi(const DensityPath& path, const ReferenceForm& ref, int p, Exec exec) {
  return banyaga_quadrant(density_gap(path), ref, p, exec);
}

std::vector<ScalarField> solve_eta(const FormField& psi, const DensityPath& path, double t) {
  const int m = psi.m();
  if (psi.degree != m - 1) throw DegreeError("solve_eta: psi must have degree m-1");
  if (!psi.grid.same_lattice(path.grid)) throw DomainError("solve_eta: grids differ");
  std::vector<ScalarField> eta(m, ScalarField(path.grid));
  for (int axis = 0; axis < m; ++axis) {
    const int ci = eta_component_index(m, axis);
    const double sgn = eta_sign(axis);
    for (std::size_t k = 0; k < path.grid.size(); ++k) {
      const double rho = path.rho_t(t, k);
      if (!(rho > 0.0))
        throw DegeneracyError("solve_eta: density path degenerates at node " + std::to_string(k));
      eta[axis].values[k] = sgn * psi.comp[ci][k] / rho;
    }
  }
  return eta;
}

namespace {

struct StencilCell {
  std::array<std::size_t, 8> node;
  std::array<double, 8> weight;
  int corners = 1;
};

StencilCell locate(const Grid& grid, const std::array<double, 3>& x) {
  const int m = grid.m();
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < m; ++a) {
    double s = (x[a] - grid.domain.lo(a)) / grid.spacing[a];
    // Non-finite coordinates (diverged trajectories) fall back to the first
    // cell; the flow's finiteness check reports them.
    if (!(s >= 0.0)) s = 0.0;
    if (s > grid.n[a] - 1) s = static_cast<double>(grid.n[a] - 1);
    int i0 = static_cast<int>(std::floor(s));
    if (i0 > grid.n[a] - 2) i0 = grid.n[a] - 2;
    base[a] = i0;
    frac[a] = s - i0;
  }
  StencilCell cell;
  cell.corners = 1 << m;
  for (int c = 0; c < cell.corners; ++c) {
    double w = 1.0;
    std::array<int, 3> idx = base;
    for (int a = 0; a < m; ++a) {
      if ((c >> a) & 1) {
        idx[a] += 1;
        w *= frac[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    cell.node[c] = grid.index(idx);
    cell.weight[c] = w;
  }
  return cell;
}

}  // namespace

void TimeVectorField::eval(double t, const std::array<double, 3>& x,
                           std::array<double, 3>& out) const {
  const int m = grid.m();
  int k = static_cast<int>(std::floor(t * slabs));
  if (k < 0) k = 0;
  if (k > slabs - 1) k = slabs - 1;
  const double theta = t * slabs - k;

  const StencilCell cell = locate(grid, x);
  out.fill(0.0);
  for (int c = 0; c < cell.corners; ++c) {
    const double w = cell.weight[c];
    if (w == 0.0) continue;
    const std::size_t node = cell.node[c];
    for (int a = 0; a < m; ++a)
      out[a] += w * ((1.0 - theta) * slab[k][a][node] + theta * slab[k + 1][a][node]);
  }
}

void TimeVectorField::eval_gradient(double t, const std::array<double, 3>& x,
                                    std::array<double, 9>& out) const {
  const int m = grid.m();
  int k = static_cast<int>(std::floor(t * slabs));
  if (k < 0) k = 0;
  if (k > slabs - 1) k = slabs - 1;
  const double theta = t * slabs - k;

  const StencilCell cell = locate(grid, x);
  out.fill(0.0);
  for (int c = 0; c < cell.corners; ++c) {
    const double w = cell.weight[c];
    if (w == 0.0) continue;
    const std::size_t node = cell.node[c];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double g0 = grad[k][i * m + j][node];
        const double g1 = grad[k + 1][i * m + j][node];
        out[i * 3 + j] += w * ((1.0 - theta) * g0 + theta * g1);
      }
  }
}

TimeVectorField build_time_field(const FormField& psi, const DensityPath& path, int slabs) {
  if (slabs < 1) throw ParameterError("build_time_field: need at least one slab");
  const int m = psi.m();
  TimeVectorField tvf;
  tvf.grid = path.grid;
  tvf.slabs = slabs;
  tvf.slab.resize(slabs + 1);
  tvf.grad.resize(slabs + 1);
  for (int k = 0; k <= slabs; ++k) {
    const double t = static_cast<double>(k) / slabs;
    tvf.slab[k].assign(m, std::vector<double>(path.grid.size(), 0.0));
    tvf.grad[k].resize(static_cast<std::size_t>(m) * m);
    for (int axis = 0; axis < m; ++axis) {
      const int ci = eta_component_index(m, axis);
      const double sgn = eta_sign(axis);
      for (std::size_t node = 0; node < path.grid.size(); ++node) {
        const double rho = path.rho_t(t, node);
        if (!(rho > 0.0))
          throw DegeneracyError("build_time_field: density path degenerates at node " +
                                std::to_string(node));
        tvf.slab[k][axis][node] = sgn * psi.comp[ci][node] / rho;
      }
      for (int j = 0; j < m; ++j)
        tvf.grad[k][axis * m + j] = derivative_axis(path.grid, tvf.slab[k][axis], j);
    }
  }
  return tvf;
}

std::vector<std::size_t> all_nodes(const Grid& grid) {
  std::vector<std::size_t> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

std::vector<std::size_t> boundary_nodes(const Grid& grid) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto idx = grid.unindex(k);
    for (int a = 0; a < grid.m(); ++a) {
      if ((idx[a] == 0 && grid.domain.clamped_low(a)) ||
          (idx[a] == grid.n[a] - 1 && grid.domain.clamped_high(a))) {
        out.push_back(k);
        break;
      }
    }
  }
  return out;
}

namespace {

struct RkState {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::array<double, 9> jac{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

struct RkDeriv {
  std::array<double, 3> dx{0.0, 0.0, 0.0};
  std::array<double, 9> djac{0, 0, 0, 0, 0, 0, 0, 0, 0};
};

RkDeriv rk_rhs(const TimeVectorField& tvf, double t, const RkState& s) {
  const int m = tvf.grid.m();
  RkDeriv d;
  tvf.eval(t, s.x, d.dx);
  std::array<double, 9> g{};
  tvf.eval_gradient(t, s.x, g);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += g[i * 3 + k] * s.jac[k * 3 + j];
      d.djac[i * 3 + j] = acc;
    }
  return d;
}

RkState rk_advance(const Grid& grid, const RkState& s, const RkDeriv& d, double factor) {
  RkState out = s;
  for (int a = 0; a < 3; ++a) out.x[a] += factor * d.dx[a];
  for (int a = 0; a < 9; ++a) out.jac[a] += factor * d.djac[a];
  clamp_point(grid, out.x);
  return out;
}

}  // namespace

FlowMap integrate_flow(const TimeVectorField& eta, const std::vector<std::size_t>& seeds,
                       int steps, Exec exec) {
  if (steps < 10) throw ParameterError("integrate_flow: need at least 10 steps");
  const Grid& grid = eta.grid;
  const int m = grid.m();

  FlowMap flow;
  flow.grid = grid;
  flow.seeds = seeds;
  flow.endpoint.assign(seeds.size(), {0.0, 0.0, 0.0});
  flow.det_variational.assign(seeds.size(), 1.0);
  flow.full_grid = seeds.size() == grid.size();
  if (flow.full_grid)
    for (std::size_t k = 0; k < seeds.size(); ++k)
      if (seeds[k] != k) {
        flow.full_grid = false;
        break;
      }

  const double dt = 1.0 / steps;
  std::atomic<std::int64_t> failed{-1};

  parallel_for(exec, static_cast<std::int64_t>(seeds.size()), [&](std::int64_t s) {
    RkState state;
    state.x = grid.point(seeds[s]);
    for (int step = 0; step < steps; ++step) {
      const double t0 = step * dt;
      const RkDeriv k1 = rk_rhs(eta, t0, state);
      const RkDeriv k2 = rk_rhs(eta, t0 + 0.5 * dt, rk_advance(grid, state, k1, 0.5 * dt));
      const RkDeriv k3 = rk_rhs(eta, t0 + 0.5 * dt, rk_advance(grid, state, k2, 0.5 * dt));
      const RkDeriv k4 = rk_rhs(eta, t0 + dt, rk_advance(grid, state, k3, dt));
      for (int a = 0; a < 3; ++a)
        state.x[a] += dt / 6.0 * (k1.dx[a] + 2.0 * k2.dx[a] + 2.0 * k3.dx[a] + k4.dx[a]);
      for (int a = 0; a < 9; ++a)
        state.jac[a] += dt / 6.0 * (k1.djac[a] + 2.0 * k2.djac[a] + 2.0 * k3.djac[a] + k4.djac[a]);
      clamp_point(grid, state.x);
      bool ok = true;
      for (int a = 0; a < m; ++a) ok = ok && std::isfinite(state.x[a]);
      if (!ok) {
        failed.store(s);
        return;
      }
    }
    flow.endpoint[s] = state.x;
    flow.det_variational[s] = det_m(state.jac, m);
  });

  if (failed.load() >= 0)
    throw IntegrationError("integrate_flow: trajectory diverged at seed node " +
                           std::to_string(seeds[failed.load()]));

  if (flow.full_grid) {
    std::vector<std::vector<double>> phi(m, std::vector<double>(grid.size(), 0.0));
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (int a = 0; a < m; ++a) phi[a][k] = flow.endpoint[k][a];
    std::vector<std::vector<double>> deriv(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) deriv[i * m + j] = derivative_axis(grid, phi[i], j);
    flow.det_finite_difference.assign(grid.size(), 1.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::array<double, 9> jac{1, 0, 0, 0, 1, 0, 0, 0, 1};
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) jac[i * 3 + j] = deriv[i * m + j][k];
      flow.det_finite_difference[k] = det_m(jac, m);
    }
  }
  return flow;
}

ResidualReport pullback_residual(const FlowMap& flow, const DensityPath& path) {
  if (!flow.full_grid)
    throw DomainError("pullback_residual: flow must be seeded on the full grid");
  if (!flow.grid.same_lattice(path.grid))
    throw DomainError("pullback_residual: grids differ");
  const Grid& grid = flow.grid;
  const auto w = quadrature_weights(grid);

  ResidualReport rep;
  rep.residual.assign(grid.size(), 0.0);
  rep.min_det = flow.det_variational.empty() ? 0.0 : flow.det_variational[0];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double det = flow.det_variational[k];
    const double transported = det * path.rho1.eval(flow.endpoint[k]);
    const double r = transported - path.rho0.values[k];
    rep.residual[k] = r;
    rep.sup = std::max(rep.sup, std::abs(r));
    rep.l1 += w[k] * std::abs(r);
    rep.mass_in += w[k] * path.rho0.values[k];
    rep.mass_out += w[k] * transported;
    rep.min_det = std::min(rep.min_det, det);
    if (!flow.det_finite_difference.empty())
      rep.det_estimator_gap =
          std::max(rep.det_estimator_gap, std::abs(det - flow.det_finite_difference[k]));
  }
  rep.mass_error = std::abs(rep.mass_out - rep.mass_in);
  return rep;
}

BoundaryReport boundary_identity_check(const FlowMap& flow, const DensityPath& path) {
  const Grid& grid = flow.grid;
  const int m = grid.m();
  BoundaryReport rep;

  for (const auto& s : enumerate_strata(grid.domain)) {
    if (s.codim() < 2) continue;
    for (std::size_t node : stratum_nodes(grid, s))
      if (std::abs(path.rho1.values[node] - path.rho0.values[node]) > 1e-10)
        rep.applicable = false;
  }

  bool any = false;
  const int deepest = grid.domain.kind == DomainKind::cube ? m : grid.domain.p;
  for (std::size_t s = 0; s < flow.seeds.size(); ++s) {
    const std::size_t node = flow.seeds[s];
    const auto idx = grid.unindex(node);
    const auto x = grid.point(node);
    int codim = 0;
    double face_dist = 0.0;
    double disp2 = 0.0;
    for (int a = 0; a < m; ++a) {
      const double d = flow.endpoint[s][a] - x[a];
      disp2 += d * d;
      const bool low = idx[a] == 0 && grid.domain.clamped_low(a);
      const bool high = idx[a] == grid.n[a] - 1 && grid.domain.clamped_high(a);
      if (low || high) {
        ++codim;
        face_dist = std::max(face_dist, std::abs(flow.endpoint[s][a] - x[a]));
      }
    }
    if (codim == 0) continue;
    any = true;
    const double disp = std::sqrt(disp2);
    rep.max_displacement = std::max(rep.max_displacement, disp);
    rep.max_face_distance = std::max(rep.max_face_distance, face_dist);
    if (codim == deepest && deepest >= 1)
      rep.max_corner_displacement = std::max(rep.max_corner_displacement, disp);
  }
  if (!any) throw DomainError("boundary_identity_check: flow has no boundary seeds");
  return rep;
}

}  // namespace corner

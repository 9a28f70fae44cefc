#include "corner/banyaga.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corner {

namespace {

double trapezoid_1d(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += 0.5 * h * (f[i] + f[i + 1]);
  return s;
}

void check_truncation_support(const FormField& alpha, double tol = 1e-12) {
  const Grid& g = alpha.grid;
  const int m = g.m();
  for (int axis = 0; axis < m; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const bool truncated =
          side == 0 ? g.domain.truncated_low(axis) : g.domain.truncated_high(axis);
      if (!truncated) continue;
      const int fixed = side == 0 ? 0 : g.n[axis] - 1;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.unindex(k)[axis] != fixed) continue;
        for (const auto& c : alpha.comp)
          if (std::abs(c[k]) > tol)
            throw SupportError("operator input does not vanish at the truncation face of axis " +
                               std::to_string(axis + 1));
      }
    }
  }
}

// Grid-normalized node values of the reference factors, one array per axis.
using AxisValues = std::vector<std::vector<double>>;

BumpSpec default_corner_cutoff(const Grid& grid) {
  const int last = grid.m() - 1;
  const double span = grid.domain.hi(last) - grid.domain.lo(last);
  return cutoff(grid.domain.lo(last) + 0.25 * span, grid.domain.lo(last) + 0.75 * span);
}

FormField op_rec(const FormField& alpha, const AxisValues& gvals, int p, Exec exec);

// Base case: cumulative trapezoid of a - g * T from the left end. The grid
// normalization of g makes the value at the right end telescope to zero
// exactly.
FormField op_1d(const FormField& alpha, const std::vector<double>& g) {
  const Grid& grid = alpha.grid;
  const int n = grid.n[0];
  const double h = grid.spacing[0];
  const auto& a = alpha.comp[0];
  const double T = trapezoid_1d(a, h);
  FormField out(grid, 0);
  double acc = 0.0;
  for (int i = 1; i < n; ++i) {
    const double f0 = a[i - 1] - g[i - 1] * T;
    const double f1 = a[i] - g[i] * T;
    acc += 0.5 * h * (f0 + f1);
    out.comp[0][i] = acc;
  }
  return out;
}

FormField op_aux(const FormField& alpha, const AxisValues& gvals, int p, Exec exec) {
  const Grid& grid = alpha.grid;
  const int m = grid.m();
  const Grid sub = grid.reduced();
  const int nlast = grid.n[m - 1];
  const double hlast = grid.spacing[m - 1];
  const std::size_t block = sub.size();
  const int p_slice = (p == m) ? m - 1 : p;

  AxisValues sub_gvals(gvals.begin(), gvals.end() - 1);
  const std::vector<double>& glast = gvals[m - 1];

  FormField out(grid, m - 1);
  std::vector<double> slice_mass(nlast, 0.0);
  const auto wr = quadrature_weights(sub);

  parallel_for(exec, nlast, [&](std::int64_t j) {
    FormField a1(sub, m - 1);
    const double* src = alpha.comp[0].data() + static_cast<std::size_t>(j) * block;
    std::copy(src, src + block, a1.comp[0].begin());
    double mass = 0.0;
    for (std::size_t k = 0; k < block; ++k) mass += wr[k] * src[k];
    slice_mass[j] = mass;

    const FormField s = op_rec(a1, sub_gvals, p_slice, Exec::serial);
    for (std::size_t ci = 0; ci < s.comp.size(); ++ci) {
      const unsigned mask = comp_mask(m - 1, m - 2, static_cast<int>(ci)) | (1u << (m - 1));
      const int cj = comp_index(m, m - 1, mask);
      double* dst = out.comp[cj].data() + static_cast<std::size_t>(j) * block;
      std::copy(s.comp[ci].begin(), s.comp[ci].end(), dst);
    }
  });

  const double total = trapezoid_1d(slice_mass, hlast);

  std::vector<double> cum(nlast, 0.0);
  for (int j = 1; j < nlast; ++j) {
    const double f0 = slice_mass[j - 1] - glast[j - 1] * total;
    const double f1 = slice_mass[j] - glast[j] * total;
    cum[j] = cum[j - 1] + 0.5 * hlast * (f0 + f1);
  }

  std::vector<double> wprime(block, 1.0);
  for (std::size_t k = 0; k < block; ++k) {
    const auto idx = sub.unindex(k);
    for (int a = 0; a < m - 1; ++a) wprime[k] *= sub_gvals[a][idx[a]];
  }

  const double sgn = ((m - 1) % 2 == 0) ? 1.0 : -1.0;
  const int cj0 = comp_index(m, m - 1, (1u << (m - 1)) - 1u);
  for (int j = 0; j < nlast; ++j) {
    double* dst = out.comp[cj0].data() + static_cast<std::size_t>(j) * block;
    const double f = sgn * cum[j];
    for (std::size_t k = 0; k < block; ++k) dst[k] += f * wprime[k];
  }
  return out;
}

FormField op_corner(const FormField& alpha, const AxisValues& gvals, const BumpSpec& h,
                    Exec exec) {
  const Grid& grid = alpha.grid;
  const int m = grid.m();
  const std::size_t block = grid.reduced().size();
  const int nlast = grid.n[m - 1];

  FormField beta(grid, m);
  for (int j = 0; j < nlast; ++j) {
    const double hj = eval_bump(h, grid.coord(m - 1, j));
    if (hj == 0.0) continue;
    double* dst = beta.comp[0].data() + static_cast<std::size_t>(j) * block;
    for (std::size_t k = 0; k < block; ++k) dst[k] = hj * alpha.comp[0][k];
  }
  FormField gamma = alpha;
  gamma -= beta;

  const ChartMap rho = ChartMap::transpose_last(m);
  FormField out = op_aux(gamma, gvals, m, exec);
  out += pullback_chart(rho, op_aux(pullback_chart(rho, beta), gvals, m, exec));
  return out;
}

FormField op_rec(const FormField& alpha, const AxisValues& gvals, int p, Exec exec) {
  const int m = alpha.grid.m();
  if (m == 1) return op_1d(alpha, gvals[0]);
  if (p == m) return op_corner(alpha, gvals, default_corner_cutoff(alpha.grid), exec);
  return op_aux(alpha, gvals, p, exec);
}

AxisValues normalized_axis_values(const Grid& grid, const std::vector<BumpSpec>& specs) {
  AxisValues vals(grid.m());
  for (int a = 0; a < grid.m(); ++a) {
    vals[a].resize(grid.n[a]);
    for (int i = 0; i < grid.n[a]; ++i) vals[a][i] = eval_bump(specs[a], grid.coord(a, i));
    const double mass = trapezoid_1d(vals[a], grid.spacing[a]);
    if (!(mass > 0.0))
      throw SupportError("reference bump on axis " + std::to_string(a + 1) +
                         " is invisible to the grid");
    for (auto& v : vals[a]) v /= mass;
  }
  return vals;
}

void require_swappable_axes(const Grid& grid, const ReferenceForm& ref, int p) {
  // Corner corrections fire at every recursion level whose remaining axes are
  // all clamped, transposing the trailing pair each time; that chains the
  // first p axes together, so their lattice and reference factor must match
  // (the correction needs the transposed reference to equal minus itself).
  if (p < 2) return;
  for (int a = 1; a < p; ++a) {
    if (grid.n[a] != grid.n[0] || std::abs(grid.spacing[a] - grid.spacing[0]) > 1e-14)
      throw DomainError("corner correction requires clamped axes to share the lattice");
    if (std::abs(ref.axis_bumps[a].a - ref.axis_bumps[0].a) > 1e-14 ||
        std::abs(ref.axis_bumps[a].b - ref.axis_bumps[0].b) > 1e-14)
      throw ConfigError("corner correction requires equal reference bumps on clamped axes");
  }
}

void validate_reference(const FormField& alpha, const ReferenceForm& ref) {
  if (!alpha.grid.same_lattice(ref.grid))
    throw ConfigError("reference form lives on a different grid");
  if (static_cast<int>(ref.axis_bumps.size()) != alpha.m())
    throw ConfigError("reference form is not in per-axis product form");
}

}  // namespace

ReferenceForm make_reference(const Grid& grid, const std::vector<BumpSpec>& specs) {
  const int m = grid.m();
  if (static_cast<int>(specs.size()) != m)
    throw ConfigError("make_reference: one bump per axis required");
  for (int a = 0; a < m; ++a) {
    if (specs[a].kind != BumpKind::unit_bump)
      throw ConfigError("make_reference: factors must be unit bumps");
    const double margin = 2.0 * grid.spacing[a];
    if (specs[a].a < grid.domain.lo(a) + margin - 1e-12 ||
        specs[a].b > grid.domain.hi(a) - margin + 1e-12)
      throw SupportError("make_reference: bump support must keep a two-cell margin");
  }
  ReferenceForm ref;
  ref.grid = grid;
  ref.axis_bumps = specs;
  ref.axis_values = normalized_axis_values(grid, specs);
  ref.mass = 1.0;
  for (int a = 0; a < m; ++a) ref.mass *= bump_mass(specs[a]);
  if (std::abs(ref.mass - 1.0) > 1e-6)
    throw MassError("make_reference: reference mass deviates from one");
  ref.omega = FormField(grid, m);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto idx = grid.unindex(k);
    double v = 1.0;
    for (int a = 0; a < m; ++a) v *= ref.axis_values[a][idx[a]];
    ref.omega.comp[0][k] = v;
  }
  return ref;
}

ReferenceForm default_reference(const Grid& grid) {
  // The flat-exponential profile has steep interior layers near its support
  // ends; a support covering 70% of the axis keeps the second-order regime of
  // the residual checks within reach of moderate grids.
  std::vector<BumpSpec> specs;
  for (int a = 0; a < grid.m(); ++a) {
    const double lo = grid.domain.lo(a), hi = grid.domain.hi(a);
    specs.push_back(unit_bump(lo + 0.12 * (hi - lo), lo + 0.88 * (hi - lo)));
  }
  return make_reference(grid, specs);
}

FormField banyaga_1d(const FormField& alpha, const BumpSpec& g, int p) {
  if (alpha.m() != 1 || alpha.degree != 1)
    throw DegreeError("banyaga_1d: needs a 1-form on a 1D grid");
  if (p != 0 && p != 1) throw DomainError("banyaga_1d: p must be 0 or 1");
  if (p == 0) check_truncation_support(alpha);
  AxisValues vals = normalized_axis_values(alpha.grid, {g});
  return op_1d(alpha, vals[0]);
}

FormField banyaga_aux(const FormField& alpha, const ReferenceForm& ref, int p, Exec exec) {
  const int m = alpha.m();
  if (m < 2 || alpha.degree != m) throw DegreeError("banyaga_aux: needs a top form, m >= 2");
  if (p < 0 || p > m) throw DomainError("banyaga_aux: p out of range");
  validate_reference(alpha, ref);
  check_truncation_support(alpha);
  require_swappable_axes(alpha.grid, ref, p);
  return op_aux(alpha, ref.axis_values, p, exec);
}

FormField corner_correction(const FormField& alpha, const ReferenceForm& ref,
                            const BumpSpec& h, Exec exec) {
  const int m = alpha.m();
  if (m < 2 || alpha.degree != m)
    throw DegreeError("corner_correction: needs a top form, m >= 2");
  if (alpha.grid.domain.kind == DomainKind::quadrant && alpha.grid.domain.p != m)
    throw DomainError("corner_correction: only defined for p = m");
  validate_reference(alpha, ref);
  check_truncation_support(alpha);
  require_swappable_axes(alpha.grid, ref, m);
  if (h.kind != BumpKind::cutoff && h.kind != BumpKind::mollifier)
    throw ConfigError("corner_correction: h must be a cutoff");
  return op_corner(alpha, ref.axis_values, h, exec);
}

FormField banyaga_quadrant(const FormField& alpha, const ReferenceForm& ref, int p,
                           Exec exec) {
  const int m = alpha.m();
  if (alpha.degree != m) throw DegreeError("banyaga_quadrant: needs a top form");
  if (p < 0 || p > m) throw DomainError("banyaga_quadrant: p out of range");
  if (alpha.grid.domain.kind == DomainKind::quadrant && alpha.grid.domain.p != p)
    throw DomainError("banyaga_quadrant: p disagrees with the domain");
  validate_reference(alpha, ref);
  check_truncation_support(alpha);
  require_swappable_axes(alpha.grid, ref, p);
  return op_rec(alpha, ref.axis_values, p, exec);
}

FormField change_reference(const FormField& I_alpha, const FormField& I_new_reference,
                           double integral_alpha) {
  FormField out = I_alpha;
  out -= I_new_reference * integral_alpha;
  return out;
}

Atlas cube_atlas(const Grid& grid, double delta, double bump_halfwidth) {
  const int m = grid.m();
  if (grid.domain.kind != DomainKind::cube) throw DomainError("cube_atlas: needs a cube grid");
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("cube_atlas: delta must be in (0, 1/2)");
  if (!(bump_halfwidth > 0.0 && bump_halfwidth < std::min(delta, 0.5)))
    throw DomainError("cube_atlas: bump halfwidth must be below min(delta, 1/2)");
  for (int a = 1; a < m; ++a)
    if (grid.n[a] != grid.n[0]) throw DomainError("cube_atlas: axes must share the node count");
  const double h = grid.spacing[0];
  if (delta < 2.0 * h - 1e-12)
    throw DomainError("cube_atlas: partition margin is under two cells; refine the grid");

  Atlas atlas;
  atlas.grid = grid;
  atlas.delta = delta;

  atlas.chart_grid = grid;
  atlas.chart_grid.domain = Domain::quadrant(m, m, {1.0, 1.0, 1.0});

  const int charts = 1 << m;
  // Wide transition; any point's nearest corner chart sees coordinates
  // <= 1/2 < 1 - delta, so the weights always cover.
  const BumpSpec q = cutoff(0.1, 1.0 - delta);
  std::vector<std::vector<double>> w(charts, std::vector<double>(grid.size(), 1.0));
  for (int c = 0; c < charts; ++c) {
    atlas.charts.push_back(ChartMap::reflections(m, static_cast<unsigned>(c)));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto x = grid.point(k);
      double v = 1.0;
      for (int a = 0; a < m; ++a) {
        const double chart_coord = ((c >> a) & 1) ? 1.0 - x[a] : x[a];
        v *= eval_bump(q, chart_coord);
      }
      w[c][k] = v;
    }
  }
  for (int c = 0; c < charts; ++c) atlas.partition.emplace_back(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double sum = 0.0;
    for (int c = 0; c < charts; ++c) sum += w[c][k];
    if (!(sum > 0.0)) throw DomainError("cube_atlas: partition fails to cover a node");
    for (int c = 0; c < charts; ++c) atlas.partition[c].values[k] = w[c][k] / sum;
  }

  std::vector<BumpSpec> specs(m, unit_bump(0.5 - bump_halfwidth, 0.5 + bump_halfwidth));
  atlas.reference = make_reference(atlas.chart_grid, specs);
  return atlas;
}

FormField banyaga_cube(const FormField& alpha, const Atlas& atlas, Exec exec) {
  const int m = alpha.m();
  if (alpha.degree != m) throw DegreeError("banyaga_cube: needs a top form");
  if (!alpha.grid.same_lattice(atlas.grid) || alpha.grid.domain.kind != DomainKind::cube)
    throw DomainError("banyaga_cube: alpha must live on the atlas cube grid");

  FormField out(alpha.grid, m - 1);
  for (std::size_t c = 0; c < atlas.charts.size(); ++c) {
    FormField piece = alpha;
    for (std::size_t k = 0; k < piece.comp[0].size(); ++k)
      piece.comp[0][k] *= atlas.partition[c].values[k];
    FormField local = with_grid(pullback_chart(atlas.charts[c], piece), atlas.chart_grid);
    const FormField primitive = banyaga_quadrant(local, atlas.reference, m, exec);
    out += with_grid(pullback_chart(atlas.charts[c], primitive), alpha.grid);
  }
  return out;
}

double boundary_sup(const FormField& a) {
  const Grid& g = a.grid;
  const int m = g.m();
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unindex(k);
    bool on_boundary = false;
    for (int axis = 0; axis < m && !on_boundary; ++axis) {
      if (idx[axis] == 0 && g.domain.clamped_low(axis)) on_boundary = true;
      if (idx[axis] == g.n[axis] - 1 && g.domain.clamped_high(axis)) on_boundary = true;
    }
    if (!on_boundary) continue;
    for (const auto& comp : a.comp) s = std::max(s, std::abs(comp[k]));
  }
  return s;
}

}  // namespace corner

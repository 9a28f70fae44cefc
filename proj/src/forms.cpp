#include "corner/forms.hpp"

#include <algorithm>
#include <cmath>

namespace corner {

namespace {

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Lexicographic list of k-subsets of {0..m-1} as bitmasks, m <= 3.
std::vector<unsigned> comb_masks(int m, int k) {
  std::vector<unsigned> out;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    out.push_back(mask);
  }
  // Bitmask order with axis 0 as the low bit is not lexicographic on the
  // sorted axis lists; sort explicitly.
  std::sort(out.begin(), out.end(), [&](unsigned a, unsigned b) {
    for (int axis = 0; axis < m; ++axis) {
      const bool ia = (a >> axis) & 1u, ib = (b >> axis) & 1u;
      if (ia != ib) return ia;
    }
    return false;
  });
  return out;
}

const std::vector<unsigned>& masks_for(int m, int k) {
  static std::vector<unsigned> table[4][4];
  static bool built = false;
  if (!built) {
    for (int mm = 0; mm <= 3; ++mm)
      for (int kk = 0; kk <= mm; ++kk) table[mm][kk] = comb_masks(mm, kk);
    built = true;
  }
  if (m < 0 || m > 3 || k < 0 || k > m) throw DegreeError("form degree out of range");
  return table[m][k];
}

}  // namespace

int comp_count(int m, int degree) { return binom(m, degree); }

unsigned comp_mask(int m, int degree, int ci) { return masks_for(m, degree).at(ci); }

int comp_index(int m, int degree, unsigned mask) {
  const auto& masks = masks_for(m, degree);
  for (std::size_t i = 0; i < masks.size(); ++i)
    if (masks[i] == mask) return static_cast<int>(i);
  throw DegreeError("comp_index: mask does not match degree");
}

std::string comp_name(int m, int degree, int ci) {
  if (degree == 0) return "1";
  const unsigned mask = comp_mask(m, degree, ci);
  std::string s;
  for (int a = 0; a < m; ++a) {
    if (!((mask >> a) & 1u)) continue;
    if (!s.empty()) s += "^";
    s += "du" + std::to_string(a + 1);
  }
  return s;
}

double ScalarField::eval(const std::array<double, 3>& x) const {
  const int m = grid.m();
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < m; ++a) {
    if (grid.n[a] == 1) continue;
    double s = (x[a] - grid.domain.lo(a)) / grid.spacing[a];
    s = std::min(std::max(s, 0.0), static_cast<double>(grid.n[a] - 1));
    int i0 = static_cast<int>(std::floor(s));
    if (i0 > grid.n[a] - 2) i0 = grid.n[a] - 2;
    base[a] = i0;
    frac[a] = s - i0;
  }
  double acc = 0.0;
  const int corners = 1 << m;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> idx = base;
    for (int a = 0; a < m; ++a) {
      if ((c >> a) & 1) {
        if (grid.n[a] == 1) { w = 0.0; break; }
        idx[a] += 1;
        w *= frac[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w != 0.0) acc += w * values[grid.index(idx)];
  }
  return acc;
}

FormField::FormField(const Grid& g, int k) : grid(g), degree(k) {
  if (k < 0 || k > g.m()) throw DegreeError("FormField: degree out of range");
  comp.assign(comp_count(g.m(), k), std::vector<double>(g.size(), 0.0));
}

FormField& FormField::operator+=(const FormField& o) {
  if (degree != o.degree || !grid.same_lattice(o.grid))
    throw DomainError("form arithmetic: mismatched forms");
  for (std::size_t c = 0; c < comp.size(); ++c)
    for (std::size_t i = 0; i < comp[c].size(); ++i) comp[c][i] += o.comp[c][i];
  return *this;
}

FormField& FormField::operator-=(const FormField& o) {
  if (degree != o.degree || !grid.same_lattice(o.grid))
    throw DomainError("form arithmetic: mismatched forms");
  for (std::size_t c = 0; c < comp.size(); ++c)
    for (std::size_t i = 0; i < comp[c].size(); ++i) comp[c][i] -= o.comp[c][i];
  return *this;
}

FormField& FormField::operator*=(double c) {
  for (auto& v : comp)
    for (auto& x : v) x *= c;
  return *this;
}

FormField operator+(FormField a, const FormField& b) { return a += b; }
FormField operator-(FormField a, const FormField& b) { return a -= b; }
FormField operator*(FormField a, double c) { return a *= c; }

double sup_norm(const FormField& a) {
  double s = 0.0;
  for (const auto& v : a.comp)
    for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double sup_diff(const FormField& a, const FormField& b) {
  if (a.degree != b.degree || !a.grid.same_lattice(b.grid))
    throw DomainError("sup_diff: mismatched forms");
  double s = 0.0;
  for (std::size_t c = 0; c < a.comp.size(); ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i)
      s = std::max(s, std::abs(a.comp[c][i] - b.comp[c][i]));
  return s;
}

FormField with_grid(FormField a, const Grid& g) {
  if (!a.grid.same_lattice(g)) throw DomainError("with_grid: lattices differ");
  a.grid = g;
  return a;
}

std::vector<double> derivative_axis(const Grid& grid, const std::vector<double>& values,
                                    int axis) {
  const int n = grid.n[axis];
  const double h = grid.spacing[axis];
  const std::size_t stride = grid.stride(axis);
  std::vector<double> out(values.size(), 0.0);
  if (n < 3) throw ResolutionError("derivative_axis: need at least 3 nodes");
  const std::size_t total = values.size();
  for (std::size_t k = 0; k < total; ++k) {
    const int i = static_cast<int>((k / stride) % static_cast<std::size_t>(n));
    if (i == 0) {
      out[k] = (-3.0 * values[k] + 4.0 * values[k + stride] - values[k + 2 * stride]) / (2.0 * h);
    } else if (i == n - 1) {
      out[k] = (3.0 * values[k] - 4.0 * values[k - stride] + values[k - 2 * stride]) / (2.0 * h);
    } else {
      out[k] = (values[k + stride] - values[k - stride]) / (2.0 * h);
    }
  }
  return out;
}

FormField exterior_derivative(const FormField& a) {
  const int m = a.m();
  if (a.degree >= m) throw DegreeError("exterior_derivative: degree must be below m");
  FormField d(a.grid, a.degree + 1);
  const auto& out_masks = masks_for(m, a.degree + 1);
  for (std::size_t cj = 0; cj < out_masks.size(); ++cj) {
    const unsigned J = out_masks[cj];
    int pos = 0;  // position of the axis within the sorted set J
    for (int axis = 0; axis < m; ++axis) {
      if (!((J >> axis) & 1u)) continue;
      const unsigned I = J & ~(1u << axis);
      const int ci = comp_index(m, a.degree, I);
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      const auto dv = derivative_axis(a.grid, a.comp[ci], axis);
      for (std::size_t k = 0; k < dv.size(); ++k) d.comp[cj][k] += sign * dv[k];
      ++pos;
    }
  }
  return d;
}

double integrate_top(const FormField& a, QuadRule rule) {
  const int m = a.m();
  if (a.degree != m) throw DegreeError("integrate_top: form must have top degree");
  if (m == 0) return a.comp[0][0];
  const auto w = quadrature_weights(a.grid, rule);
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * a.comp[0][k];
  return s;
}

FormField interior_product(const std::vector<ScalarField>& X, const FormField& mu) {
  const int m = mu.m();
  if (mu.degree != m) throw DegreeError("interior_product: mu must have top degree");
  if (static_cast<int>(X.size()) != m)
    throw DomainError("interior_product: need one field per axis");
  FormField out(mu.grid, m - 1);
  const unsigned full = (1u << m) - 1u;
  for (int axis = 0; axis < m; ++axis) {
    const int ci = comp_index(m, m - 1, full & ~(1u << axis));
    const double sign = (axis % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t k = 0; k < mu.comp[0].size(); ++k)
      out.comp[ci][k] = sign * X[axis].values[k] * mu.comp[0][k];
  }
  return out;
}

FormField trace_on_stratum(const FormField& a, const Stratum& s) {
  validate_stratum(a.grid.domain, s);
  const int m = a.m();
  const Grid sub = stratum_grid(a.grid, s);
  if (a.degree > sub.m())
    throw DegreeError("trace_on_stratum: degree exceeds stratum dimension");
  FormField out(sub, a.degree);

  // Axis renumbering full -> stratum and the fixed indices of the
  // constrained axes.
  std::array<int, 3> kept_axis{0, 0, 0};
  int kept = 0;
  std::array<int, 3> fixed{-1, -1, -1};
  for (const auto& c : s.constraints) fixed[c.axis] = c.high ? a.grid.n[c.axis] - 1 : 0;
  for (int axis = 0; axis < m; ++axis)
    if (!s.constrains(axis)) kept_axis[kept++] = axis;

  const auto& sub_masks = masks_for(sub.m(), a.degree);
  for (std::size_t cj = 0; cj < sub_masks.size(); ++cj) {
    unsigned full_mask = 0;
    for (int b = 0; b < sub.m(); ++b)
      if ((sub_masks[cj] >> b) & 1u) full_mask |= 1u << kept_axis[b];
    const int ci = comp_index(m, a.degree, full_mask);
    for (std::size_t ks = 0; ks < sub.size(); ++ks) {
      const auto sidx = sub.unindex(ks);
      std::array<int, 3> idx{0, 0, 0};
      for (int b = 0; b < sub.m(); ++b) idx[kept_axis[b]] = sidx[b];
      for (int axis = 0; axis < m; ++axis)
        if (fixed[axis] >= 0) idx[axis] = fixed[axis];
      out.comp[cj][ks] = a.comp[ci][a.grid.index(idx)];
    }
  }
  return out;
}

double trace_sup(const FormField& a) {
  double s = 0.0;
  for (const auto& face : codim1_faces(a.grid.domain)) {
    if (a.degree > a.m() - 1) continue;
    s = std::max(s, sup_norm(trace_on_stratum(a, face)));
  }
  return s;
}

ChartMap ChartMap::reflections(int m, unsigned axis_mask) {
  ChartMap c;
  c.m = m;
  for (int a = 0; a < m; ++a) c.reflect[a] = (axis_mask >> a) & 1u;
  return c;
}

ChartMap ChartMap::transpose_last(int m) {
  if (m < 2) throw DomainError("transpose_last: needs m >= 2");
  ChartMap c;
  c.m = m;
  c.swapped = true;
  c.swap_a = m - 2;
  c.swap_b = m - 1;
  return c;
}

int ChartMap::orientation_sign() const {
  int s = swapped ? -1 : 1;
  for (int a = 0; a < m; ++a)
    if (reflect[a]) s = -s;
  return s;
}

FormField pullback_chart(const ChartMap& phi, const FormField& a) {
  const int m = a.m();
  if (phi.m != m) throw DomainError("pullback_chart: dimension mismatch");
  const Grid& g = a.grid;
  if (phi.swapped &&
      (g.n[phi.swap_a] != g.n[phi.swap_b] ||
       std::abs(g.spacing[phi.swap_a] - g.spacing[phi.swap_b]) > 1e-14))
    throw DomainError("pullback_chart: transposed axes must share the lattice");

  FormField out(g, a.degree);
  const auto& masks = masks_for(m, a.degree);

  // Per input component I: phi^*(a_I du^I) = a_I(phi(u)) prod s_i du^{sigma(I)}.
  for (std::size_t ci = 0; ci < masks.size(); ++ci) {
    const unsigned I = masks[ci];
    double sign = 1.0;
    std::vector<int> mapped;
    for (int axis = 0; axis < m; ++axis) {
      if (!((I >> axis) & 1u)) continue;
      if (phi.reflect[axis]) sign = -sign;
      mapped.push_back(phi.source_axis(axis));
    }
    // Sort the mapped axes, tracking the permutation parity.
    for (std::size_t i = 0; i + 1 < mapped.size(); ++i)
      for (std::size_t j = i + 1; j < mapped.size(); ++j)
        if (mapped[i] > mapped[j]) {
          std::swap(mapped[i], mapped[j]);
          sign = -sign;
        }
    unsigned K = 0;
    for (int axis : mapped) K |= 1u << axis;
    const int cj = comp_index(m, a.degree, K);

    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto idx = g.unindex(k);
      std::array<int, 3> src{0, 0, 0};
      for (int j = 0; j < m; ++j) {
        const int from = phi.source_axis(j);
        src[j] = phi.reflect[j] ? g.n[j] - 1 - idx[from] : idx[from];
      }
      // src holds phi(u)'s multi-index: component J at u reads a_I at phi(u).
      out.comp[cj][k] = sign * a.comp[ci][g.index(src)];
    }
  }
  return out;
}

std::vector<FormField> slice_last_axis(const FormField& a) {
  const int m = a.m();
  if (a.degree != m) throw DegreeError("slice_last_axis: form must have top degree");
  if (m < 1) throw DomainError("slice_last_axis: needs m >= 1");
  const Grid sub = a.grid.reduced();
  const int nlast = a.grid.n[m - 1];
  const std::size_t block = sub.size();
  std::vector<FormField> slices;
  slices.reserve(nlast);
  for (int j = 0; j < nlast; ++j) {
    FormField s(sub, m - 1);
    for (std::size_t k = 0; k < block; ++k) s.comp[0][k] = a.comp[0][j * block + k];
    slices.push_back(std::move(s));
  }
  return slices;
}

FormField unslice_last_axis(const Grid& grid, const std::vector<FormField>& slices) {
  const int m = grid.m();
  if (static_cast<int>(slices.size()) != grid.n[m - 1])
    throw DomainError("unslice_last_axis: one slice per last-axis node required");
  FormField a(grid, m);
  const std::size_t block = grid.reduced().size();
  for (int j = 0; j < grid.n[m - 1]; ++j)
    for (std::size_t k = 0; k < block; ++k) a.comp[0][j * block + k] = slices[j].comp[0][k];
  return a;
}

FormField product_bump(const Grid& grid, const std::vector<BumpSpec>& specs) {
  const int m = grid.m();
  if (static_cast<int>(specs.size()) != m)
    throw ParameterError("product_bump: one factor per axis required");
  for (int a = 0; a < m; ++a) {
    if (specs[a].kind != BumpKind::unit_bump)
      throw ParameterError("product_bump: factors must be unit bumps");
    if (!(specs[a].a > grid.domain.lo(a) && specs[a].b < grid.domain.hi(a)))
      throw SupportError("product_bump: support must stay inside the open domain");
  }
  FormField out(grid, m);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.point(k);
    double v = 1.0;
    for (int a = 0; a < m; ++a) v *= eval_bump(specs[a], x[a]);
    out.comp[0][k] = v;
  }
  return out;
}

ScalarField weights_field(const Grid& grid, QuadRule rule) {
  ScalarField w(grid);
  w.values = quadrature_weights(grid, rule);
  return w;
}

}  // namespace corner

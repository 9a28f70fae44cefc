#include "corner/geometry.hpp"

#include <cmath>
#include <string>

namespace corner {

Domain Domain::cube(int m) {
  if (m < 1 || m > 3) throw DomainError("cube: dimension must be 1..3");
  Domain d;
  d.m = m;
  d.kind = DomainKind::cube;
  d.p = m;
  d.length = {1.0, 1.0, 1.0};
  return d;
}

Domain Domain::quadrant(int m, int p, std::array<double, 3> length) {
  if (m < 1 || m > 3) throw DomainError("quadrant: dimension must be 1..3");
  if (p < 0 || p > m) throw DomainError("quadrant: requires 0 <= p <= m");
  for (int a = 0; a < m; ++a)
    if (!(length[a] > 0.0)) throw DomainError("quadrant: box lengths must be positive");
  Domain d;
  d.m = m;
  d.kind = DomainKind::quadrant;
  d.p = p;
  d.length = length;
  return d;
}

bool Grid::same_lattice(const Grid& other) const {
  if (domain.m != other.domain.m) return false;
  for (int a = 0; a < domain.m; ++a) {
    if (n[a] != other.n[a]) return false;
    if (std::abs(spacing[a] - other.spacing[a]) > 1e-14 * (1.0 + std::abs(spacing[a])))
      return false;
  }
  return true;
}

Grid Grid::reduced() const {
  const int m = domain.m;
  Grid r;
  if (m <= 1) {
    r.domain = domain;
    r.domain.m = 0;
    r.domain.p = 0;
    return r;
  }
  r.domain = domain;
  r.domain.m = m - 1;
  if (domain.kind == DomainKind::quadrant && domain.p == m) r.domain.p = m - 1;
  r.n = n;
  r.spacing = spacing;
  r.n[m - 1] = 1;
  return r;
}

Grid make_grid(const Domain& domain, const std::vector<int>& n) {
  if (static_cast<int>(n.size()) != domain.m)
    throw ResolutionError("make_grid: need one node count per axis");
  Grid g;
  g.domain = domain;
  for (int a = 0; a < domain.m; ++a) {
    if (n[a] < 3) throw ResolutionError("make_grid: need at least 3 nodes per axis");
    g.n[a] = n[a];
    g.spacing[a] = (domain.hi(a) - domain.lo(a)) / (n[a] - 1);
  }
  return g;
}

std::vector<double> axis_weights(const Grid& grid, int axis, QuadRule rule) {
  const int n = grid.n[axis];
  const double h = grid.spacing[axis];
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  if (rule == QuadRule::trapezoid) {
    for (int i = 0; i < n; ++i) w[i] = h;
    w[0] = w[n - 1] = h / 2.0;
  } else {
    if (n % 2 == 0) throw ResolutionError("axis_weights: Simpson needs an odd node count");
    for (int i = 1; i < n - 1; ++i) w[i] = (i % 2 ? 4.0 : 2.0) * h / 3.0;
    w[0] = w[n - 1] = h / 3.0;
  }
  return w;
}

std::vector<double> quadrature_weights(const Grid& grid, QuadRule rule) {
  const int m = grid.m();
  std::vector<double> w(grid.size(), 1.0);
  if (m == 0) return w;
  std::array<std::vector<double>, 3> per_axis;
  for (int a = 0; a < m; ++a) per_axis[a] = axis_weights(grid, a, rule);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto idx = grid.unindex(k);
    double v = 1.0;
    for (int a = 0; a < m; ++a) v *= per_axis[a][idx[a]];
    w[k] = v;
  }
  return w;
}

void validate_stratum(const Domain& domain, const Stratum& s) {
  if (s.codim() < 1) throw DomainError("stratum: needs at least one constraint");
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const auto& c = s.constraints[i];
    if (c.axis < 0 || c.axis >= domain.m) throw DomainError("stratum: axis out of range");
    if (!c.high && !domain.clamped_low(c.axis))
      throw DomainError("stratum: low side of axis " + std::to_string(c.axis) + " is not clamped");
    if (c.high && !domain.clamped_high(c.axis))
      throw DomainError("stratum: high side of axis " + std::to_string(c.axis) + " is not clamped");
    for (std::size_t j = i + 1; j < s.constraints.size(); ++j)
      if (s.constraints[j].axis == c.axis) throw DomainError("stratum: repeated axis");
  }
}

std::vector<std::size_t> stratum_nodes(const Grid& grid, const Stratum& s) {
  validate_stratum(grid.domain, s);
  const int m = grid.m();
  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto idx = grid.unindex(k);
    bool keep = true;
    for (int a = 0; a < m && keep; ++a) {
      const bool on_low = idx[a] == 0 && grid.domain.clamped_low(a);
      const bool on_high = idx[a] == grid.n[a] - 1 && grid.domain.clamped_high(a);
      bool want_low = false, want_high = false;
      for (const auto& c : s.constraints) {
        if (c.axis != a) continue;
        (c.high ? want_high : want_low) = true;
      }
      if (on_low != want_low || on_high != want_high) keep = false;
    }
    if (keep) nodes.push_back(k);
  }
  return nodes;
}

std::vector<Stratum> enumerate_strata(const Domain& domain) {
  const int m = domain.m;
  std::vector<Stratum> out;
  // Per-axis state: 0 none, 1 low, 2 high.
  std::array<int, 3> state{0, 0, 0};
  while (true) {
    Stratum s;
    bool valid = true;
    for (int a = 0; a < m; ++a) {
      if (state[a] == 1) {
        if (!domain.clamped_low(a)) valid = false;
        s.constraints.push_back({a, false});
      } else if (state[a] == 2) {
        if (!domain.clamped_high(a)) valid = false;
        s.constraints.push_back({a, true});
      }
    }
    if (valid && s.codim() >= 1) out.push_back(s);
    int a = 0;
    for (; a < m; ++a) {
      if (++state[a] <= 2) break;
      state[a] = 0;
    }
    if (a == m) break;
  }
  return out;
}

std::vector<Stratum> codim1_faces(const Domain& domain) {
  std::vector<Stratum> out;
  for (const auto& s : enumerate_strata(domain))
    if (s.codim() == 1) out.push_back(s);
  return out;
}

Grid stratum_grid(const Grid& grid, const Stratum& s) {
  validate_stratum(grid.domain, s);
  const int m = grid.m();
  Grid r;
  r.domain.m = m - s.codim();
  r.domain.kind = grid.domain.kind;
  int kept = 0;
  int kept_clamped = 0;
  for (int a = 0; a < m; ++a) {
    if (s.constrains(a)) continue;
    r.domain.length[kept] = grid.domain.length[a];
    r.n[kept] = grid.n[a];
    r.spacing[kept] = grid.spacing[a];
    if (grid.domain.kind == DomainKind::quadrant && a < grid.domain.p) ++kept_clamped;
    ++kept;
  }
  r.domain.p = grid.domain.kind == DomainKind::quadrant ? kept_clamped : r.domain.m;
  return r;
}

}  // namespace corner

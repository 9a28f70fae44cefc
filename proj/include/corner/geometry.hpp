#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "corner/errors.hpp"

namespace corner {

enum class DomainKind { cube, quadrant };

// Model domains, dimension m <= 3: the unit cube [0,1]^m with every axis
// clamped on both sides, or a partial quadrant R^p_{>=0} x R^{m-p} with the
// first p axes clamped at zero. Quadrants are truncated to finite boxes for
// computation ([0, L_i] on clamped axes, [-L_i, L_i] on free ones); box faces
// that are not clamped sides are truncation faces, where every compactly
// supported field handled here must vanish.
struct Domain {
  int m = 1;
  DomainKind kind = DomainKind::cube;
  int p = 0;  // number of clamped axes (quadrant only)
  std::array<double, 3> length{1.0, 1.0, 1.0};

  static Domain cube(int m);
  static Domain quadrant(int m, int p, std::array<double, 3> length = {1.0, 1.0, 1.0});

  bool clamped_low(int axis) const { return kind == DomainKind::cube ? true : axis < p; }
  bool clamped_high([[maybe_unused]] int axis) const { return kind == DomainKind::cube; }
  bool truncated_low(int axis) const { return !clamped_low(axis); }
  bool truncated_high(int axis) const { return !clamped_high(axis); }
  double lo(int axis) const {
    if (kind == DomainKind::cube) return 0.0;
    return axis < p ? 0.0 : -length[axis];
  }
  double hi(int axis) const { return kind == DomainKind::cube ? 1.0 : length[axis]; }
  // Codimension-1 boundary faces: 2m for the cube, p for a quadrant.
  int face_count() const { return kind == DomainKind::cube ? 2 * m : p; }
};

// A boundary stratum: the relatively open set of points lying on exactly the
// listed clamped hyperplanes. codim == number of constraints.
struct Stratum {
  struct Constraint {
    int axis = 0;
    bool high = false;  // cube only; quadrant strata sit at the low side
  };
  std::vector<Constraint> constraints;

  int codim() const { return static_cast<int>(constraints.size()); }
  bool constrains(int axis) const {
    for (const auto& c : constraints)
      if (c.axis == axis) return true;
    return false;
  }
};

// Uniform tensor-product grid over the closed (truncated) domain. Axis 0 is
// the fastest-varying index, so fixing the last axis yields one contiguous
// block per slice.
struct Grid {
  Domain domain;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> spacing{0.0, 0.0, 0.0};

  int m() const { return domain.m; }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < domain.m; ++a) s *= static_cast<std::size_t>(n[a]);
    return s;
  }
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(n[a]);
    return s;
  }
  std::size_t index(const std::array<int, 3>& idx) const {
    std::size_t k = 0, s = 1;
    for (int a = 0; a < domain.m; ++a) {
      k += static_cast<std::size_t>(idx[a]) * s;
      s *= static_cast<std::size_t>(n[a]);
    }
    return k;
  }
  std::array<int, 3> unindex(std::size_t k) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < domain.m; ++a) {
      idx[a] = static_cast<int>(k % static_cast<std::size_t>(n[a]));
      k /= static_cast<std::size_t>(n[a]);
    }
    return idx;
  }
  double coord(int axis, int i) const { return domain.lo(axis) + spacing[axis] * i; }
  std::array<double, 3> point(std::size_t k) const {
    const auto idx = unindex(k);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < domain.m; ++a) x[a] = coord(a, idx[a]);
    return x;
  }
  // Same node lattice: dimension, counts and spacings match.
  bool same_lattice(const Grid& other) const;
  // Drop the last axis; a quadrant with p == m loses one clamped axis.
  Grid reduced() const;
};

Grid make_grid(const Domain& domain, const std::vector<int>& n);

enum class QuadRule { trapezoid, simpson };

// Composite 1D weights along one axis (length n[axis]). Simpson requires an
// odd node count.
std::vector<double> axis_weights(const Grid& grid, int axis, QuadRule rule);

// Tensor-product weights for every node; sums to the box volume.
std::vector<double> quadrature_weights(const Grid& grid, QuadRule rule = QuadRule::trapezoid);

void validate_stratum(const Domain& domain, const Stratum& s);

// Nodes lying on all of s's hyperplanes and on no other clamped hyperplane
// (the relatively open stratum).
std::vector<std::size_t> stratum_nodes(const Grid& grid, const Stratum& s);

// All nonempty strata with codim >= 1, and just the codimension-1 faces.
std::vector<Stratum> enumerate_strata(const Domain& domain);
std::vector<Stratum> codim1_faces(const Domain& domain);

// Grid of the closed stratum: the remaining axes, same counts and spacings.
Grid stratum_grid(const Grid& grid, const Stratum& s);

}  // namespace corner

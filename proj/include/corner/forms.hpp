#pragma once

#include <array>
#include <string>
#include <vector>

#include "corner/bump.hpp"
#include "corner/geometry.hpp"

namespace corner {

// Node-collocated scalar data with multilinear interpolation between nodes.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  // Multilinear interpolation; the query point is clamped to the closed box.
  double eval(const std::array<double, 3>& x) const;
};

// Component bookkeeping for degree-k forms on an m-dimensional grid: one
// scalar component per strictly increasing axis set, listed lexicographically
// and addressed either by position or by axis bitmask.
int comp_count(int m, int degree);
unsigned comp_mask(int m, int degree, int ci);
int comp_index(int m, int degree, unsigned mask);
std::string comp_name(int m, int degree, int ci);  // e.g. "du1^du3"

// A differential form of degree k as C(m,k) node-value arrays. The
// orientation convention is the coordinate one: du1^...^dum is positive.
struct FormField {
  Grid grid;
  int degree = 0;
  std::vector<std::vector<double>> comp;

  FormField() = default;
  FormField(const Grid& g, int k);

  int m() const { return grid.m(); }

  FormField& operator+=(const FormField& o);
  FormField& operator-=(const FormField& o);
  FormField& operator*=(double c);
};

FormField operator+(FormField a, const FormField& b);
FormField operator-(FormField a, const FormField& b);
FormField operator*(FormField a, double c);

double sup_norm(const FormField& a);
double sup_diff(const FormField& a, const FormField& b);

// Reinterpret the same lattice under another domain tag (cube grid viewed as
// a corner chart quadrant and back). Throws if the lattices differ.
FormField with_grid(FormField a, const Grid& g);

// Partial derivative of one node array along an axis: second-order central
// stencils inside, one-sided second-order stencils on the first and last
// plane.
std::vector<double> derivative_axis(const Grid& grid, const std::vector<double>& values,
                                    int axis);

FormField exterior_derivative(const FormField& a);

double integrate_top(const FormField& a, QuadRule rule = QuadRule::trapezoid);

// i_X mu for a top form mu: the component omitting axis i equals
// (-1)^i X^i * mu (axes 0-based).
FormField interior_product(const std::vector<ScalarField>& X, const FormField& mu);

// Tangential pullback to a stratum: keeps components avoiding every
// constrained axis, restricted to the stratum's closed grid.
FormField trace_on_stratum(const FormField& a, const Stratum& s);

// Largest tangential trace over all codimension-1 faces (0 when the domain
// has none).
double trace_sup(const FormField& a);

// Affine lattice-preserving chart maps: per-axis reflections u -> lo+hi-u,
// optionally composed with one axis transposition. Output coordinate j reads
// from input coordinate sigma(j).
struct ChartMap {
  int m = 1;
  std::array<bool, 3> reflect{false, false, false};
  bool swapped = false;
  int swap_a = 0, swap_b = 1;

  static ChartMap reflections(int m, unsigned axis_mask);
  // The transposition of the last two axes.
  static ChartMap transpose_last(int m);

  int source_axis(int j) const {
    if (!swapped) return j;
    if (j == swap_a) return swap_b;
    if (j == swap_b) return swap_a;
    return j;
  }
  // Jacobian sign: (-1)^{#reflections} times the transposition sign.
  int orientation_sign() const;
};

FormField pullback_chart(const ChartMap& phi, const FormField& a);

// A top form alpha = alpha_1(t) ^ du^m sliced along the last axis: one
// (m-1)-top form on the reduced grid per last-axis node.
std::vector<FormField> slice_last_axis(const FormField& a);
FormField unslice_last_axis(const Grid& grid, const std::vector<FormField>& slices);

// Top form with component prod_i g_i(u^i); each factor must be a unit_bump
// supported strictly inside the open axis range.
FormField product_bump(const Grid& grid, const std::vector<BumpSpec>& specs);

ScalarField weights_field(const Grid& grid, QuadRule rule = QuadRule::trapezoid);

}  // namespace corner

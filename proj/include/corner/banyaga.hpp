#pragma once

#include <vector>

#include "corner/forms.hpp"
#include "corner/parallel.hpp"

namespace corner {

// Reference top form omega = g_1(u^1) du^1 ^ ... ^ g_m(u^m) du^m with unit
// mass and support at least two cells away from every box face. Each factor
// is additionally rescaled so that its trapezoid mass on the grid is exactly
// one; this keeps the operator's telescoping sums exact at node level (zero
// values beyond supports, zero traces) instead of exact only up to the
// quadrature defect of g.
struct ReferenceForm {
  Grid grid;
  std::vector<BumpSpec> axis_bumps;
  std::vector<std::vector<double>> axis_values;  // grid-normalized factor values
  FormField omega;                               // product of the normalized factors
  double mass = 1.0;                             // analytic (Simpson) mass of the product
};

ReferenceForm make_reference(const Grid& grid, const std::vector<BumpSpec>& specs);

// Bumps supported on the middle (30%..70%) of each axis range.
ReferenceForm default_reference(const Grid& grid);

// Primitive on a 1D half line or line: the cumulative integral of
// a - g * (integral of a), starting from the left end of the grid. For p=1
// the left end is the clamped origin; for p=0 it is the truncation face,
// standing in for -infinity, so alpha must vanish near both truncation
// faces.
FormField banyaga_1d(const FormField& alpha, const BumpSpec& g, int p);

// The recursive auxiliary operator on Q^m_p, m >= 2: slice along the last
// axis, apply the (m-1)-dimensional operator fiberwise, and add the
// cumulative-mass correction carried by omega'.
FormField banyaga_aux(const FormField& alpha, const ReferenceForm& ref, int p,
                      Exec exec = Exec::openmp);

// The p = m case: split alpha = beta + gamma with
// beta = h(u^m) alpha_1(0) ^ du^m, apply the auxiliary operator to gamma and
// to the last-two-axes transpose of beta, and pull the latter back. This is
// what makes the result vanish on the whole boundary whenever alpha vanishes
// on the codimension >= 2 strata.
FormField corner_correction(const FormField& alpha, const ReferenceForm& ref,
                            const BumpSpec& h, Exec exec = Exec::openmp);

// Dispatch on (m, p); checks that alpha vanishes at truncation faces.
// Satisfies d I(alpha) = alpha - omega * integral(alpha) up to discretization
// and maps into relative forms (vanishing tangential traces).
FormField banyaga_quadrant(const FormField& alpha, const ReferenceForm& ref, int p,
                           Exec exec = Exec::openmp);

// I with reference omega~ from I with reference omega:
// I~(alpha) = I(alpha) - I(omega~) * integral(alpha).
FormField change_reference(const FormField& I_alpha, const FormField& I_new_reference,
                           double integral_alpha);

// Corner-chart atlas of the unit cube: one reflection chart per corner, a
// normalized cutoff partition of unity supported away from each chart's far
// faces, and a midpoint-centered reference bump contained in every chart.
struct Atlas {
  Grid grid;        // cube grid
  Grid chart_grid;  // same lattice tagged as Q^m_m truncated at 1
  double delta = 0.25;
  std::vector<ChartMap> charts;
  std::vector<ScalarField> partition;
  ReferenceForm reference;  // on chart_grid
};

Atlas cube_atlas(const Grid& grid, double delta = 0.45, double bump_halfwidth = 0.35);

// Glued operator on the cube: sum over corner charts of the pulled-back
// quadrant operator applied to the chart-local piece lambda_y * alpha.
FormField banyaga_cube(const FormField& alpha, const Atlas& atlas,
                       Exec exec = Exec::openmp);

// Max absolute component value over all nodes lying on a clamped face.
double boundary_sup(const FormField& a);

}  // namespace corner

#pragma once

#include <string>
#include <vector>

#include "corner/banyaga.hpp"
#include "corner/moser.hpp"

namespace corner {

// Both sides of the boundary-integral identity: integral of d(omega) over the
// box against the signed face integrals of omega's tangential trace.
struct StokesResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

StokesResult stokes_check(const FormField& omega);

// The radial estimate behind the boundary-integral proof: for the decreasing
// profile f with f=1 near 0 and f=0 beyond eps,
//   |int_{Q^m} f'(|x|) dx| = C_m |int f'(r) r^{m-1} dr|
//                          = C_m  int_0^eps f(r) (r^{m-1})' dr  <=  C_m eps^{m-1},
// with C_m the surface measure of the unit-sphere patch in the quadrant.
struct MollifierCheck {
  int m = 2;
  double eps = 0.1;
  double multidim = 0.0;       // |quadrant integral of f'(|x|)|
  double radial = 0.0;         // C_m |int f'(r) r^{m-1}|
  double parts = 0.0;          // C_m  int_0^eps f (r^{m-1})'
  double bound = 0.0;          // C_m eps^{m-1}
  double surface_const = 0.0;  // C_m, computed by quadrature
  double tail_mass = 0.0;      // int_0^inf f(r) dr, must stay below eps
  bool ok = false;
};

MollifierCheck mollifier_bound_check(int m, double eps, double rel_tol = 1e-6);

// Exactness witnesses for the two top-cohomology statements on the cube.
struct Witness {
  FormField primitive;
  double d_residual_sup = 0.0;
  double trace_residual = 0.0;
};

// A primitive of any top form alpha: I(alpha) plus integral(alpha) times a
// primitive of the reference form obtained from an auxiliary (m-1)-form with
// nonzero boundary integral.
Witness cohomology_top_vanishes(const FormField& alpha, const Atlas& atlas,
                                Exec exec = Exec::openmp);

// For equal-mass top forms alpha, beta: gamma = I(alpha) - I(beta) satisfies
// d(gamma) = alpha - beta with vanishing traces.
Witness relative_class_check(const FormField& alpha, const FormField& beta, const Atlas& atlas,
                             Exec exec = Exec::openmp);

struct ConvergenceReport {
  std::string study;
  std::vector<int> grids;
  std::vector<double> residuals;
  std::vector<double> orders;  // log2(r_k / r_{k+1})
  double fitted_order = 0.0;   // mean of the pairwise orders
  bool exact = false;          // every residual at the roundoff floor (<= 1e-12)
  bool monotone = true;
};

struct StudyParams {
  Exec exec = Exec::openmp;
  unsigned seed = 1;
  int rk_steps = 0;  // 0 -> study default
};

std::vector<std::string> convergence_studies();
ConvergenceReport convergence_study(const std::string& name, const std::vector<int>& grids,
                                    const StudyParams& params = {});
ConvergenceReport fit_report(const std::string& study, const std::vector<int>& grids,
                             const std::vector<double>& residuals);

// Deterministic smooth test inputs shared by the checks and the command-line
// runner. Quadrant forms are shaped by per-axis envelopes so they vanish near
// truncation faces; cube forms are unconstrained.
FormField smooth_test_form(const Grid& grid, unsigned seed = 1);
// Additionally vanishes at every node of every codimension >= 2 stratum.
FormField corner_flat_test_form(const Grid& grid, unsigned seed = 1);

// Residual diagnostics for the primitive operator on one grid.
struct OperatorCheck {
  double identity_sup = 0.0;   // sup |d I(alpha) - alpha + omega * integral|
  double trace_sup = 0.0;      // tangential traces of I(alpha)
  double boundary_sup = 0.0;   // all components on the boundary (corner-flat inputs)
  double linearity_sup = 0.0;  // I(a + 2b) vs I(a) + 2 I(b)
  double support_leak = 0.0;   // values at truncation faces
};

OperatorCheck operator_check_quadrant(const Grid& grid, unsigned seed = 1,
                                      Exec exec = Exec::openmp);
OperatorCheck operator_check_cube(const Grid& grid, unsigned seed = 1,
                                  Exec exec = Exec::openmp);

}  // namespace corner

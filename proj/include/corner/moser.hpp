#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "corner/banyaga.hpp"
#include "corner/forms.hpp"
#include "corner/parallel.hpp"

namespace corner {

// Linear density path mu_t = mu0 + t(mu1 - mu0). Both endpoints must be
// positive at every node; mu1 is rescaled to match mu0's mass when the
// relative mismatch is within 1e-6, otherwise construction fails.
struct DensityPath {
  Grid grid;
  ScalarField rho0, rho1;
  double mass = 0.0;
  double renormalization = 1.0;  // factor applied to mu1

  double rho_t(double t, std::size_t k) const {
    return rho0.values[k] + t * (rho1.values[k] - rho0.values[k]);
  }
};

DensityPath build_path(const FormField& mu0, const FormField& mu1);

// psi = I(mu1 - mu0): a relative (m-1)-form primitive of the density gap.
FormField solve_psi(const DensityPath& path, const Atlas& atlas, Exec exec = Exec::openmp);
FormField solve_psi(const DensityPath& path, const ReferenceForm& ref, int p,
                    Exec exec = Exec::openmp);

// Algebraic solve of i_eta mu_t = -psi: eta^i = -(-1)^i psi_{omit i} / rho_t
// (axes 0-based).
std::vector<ScalarField> solve_eta(const FormField& psi, const DensityPath& path, double t);

// eta_t sampled at uniform slab times on the nodes; evaluation is multilinear
// in space and linear in t between slabs. The spatial gradient is stored as
// node fields of its own (stencil derivatives of the slab values) and
// interpolated the same way, which keeps the variational Jacobian second
// order; differencing the interpolant directly would lose an order between
// nodes.
struct TimeVectorField {
  Grid grid;
  int slabs = 0;
  std::vector<std::vector<std::vector<double>>> slab;  // [k][axis][node]
  std::vector<std::vector<std::vector<double>>> grad;  // [k][axis*m+j][node]

  void eval(double t, const std::array<double, 3>& x, std::array<double, 3>& out) const;
  void eval_gradient(double t, const std::array<double, 3>& x, std::array<double, 9>& out) const;
};

TimeVectorField build_time_field(const FormField& psi, const DensityPath& path, int slabs);

// Endpoints phi(x) = Phi_{1,0}(x) of the non-autonomous flow, one per seed,
// with the Jacobian determinant from the variational equation and (for
// full-grid seed sets) from finite differences of the endpoint map.
struct FlowMap {
  Grid grid;
  std::vector<std::size_t> seeds;
  std::vector<std::array<double, 3>> endpoint;
  std::vector<double> det_variational;
  std::vector<double> det_finite_difference;  // empty unless seeded on the full grid
  bool full_grid = false;
};

std::vector<std::size_t> all_nodes(const Grid& grid);
std::vector<std::size_t> boundary_nodes(const Grid& grid);

FlowMap integrate_flow(const TimeVectorField& eta, const std::vector<std::size_t>& seeds,
                       int steps, Exec exec = Exec::openmp);

// Pointwise defect of phi^* mu1 = mu0: r(x) = det Dphi(x) rho1(phi(x)) - rho0(x).
struct ResidualReport {
  double sup = 0.0;
  double l1 = 0.0;
  double mass_in = 0.0;
  double mass_out = 0.0;
  double mass_error = 0.0;
  double min_det = 0.0;
  double det_estimator_gap = 0.0;
  std::vector<double> residual;  // per node
};

ResidualReport pullback_residual(const FlowMap& flow, const DensityPath& path);

struct BoundaryReport {
  bool applicable = true;          // mu1 - mu0 vanishes on every codim >= 2 stratum
  double max_displacement = 0.0;   // over boundary seeds
  double max_face_distance = 0.0;  // distance of phi(x) to the seed's own face
  double max_corner_displacement = 0.0;
};

BoundaryReport boundary_identity_check(const FlowMap& flow, const DensityPath& path);

}  // namespace corner

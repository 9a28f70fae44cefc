#pragma once

#include "corner/errors.hpp"

namespace corner {

// Smooth auxiliary profiles, all built from the flat exponential
// exp(-1/(1-s^2)). UnitBump integrates to one over its support, Cutoff steps
// smoothly from 1 down to 0 between its two knees, Mollifier is the cutoff
// with knees at eps/2 and eps.
enum class BumpKind { unit_bump, cutoff, mollifier };

struct BumpSpec {
  BumpKind kind = BumpKind::unit_bump;
  double a = 0.0;      // support start / first knee
  double b = 1.0;      // support end / second knee
  double scale = 1.0;  // unit-mass normalization constant
};

BumpSpec unit_bump(double a, double b);
BumpSpec cutoff(double t1, double t2);
BumpSpec mollifier(double eps);

double eval_bump(const BumpSpec& spec, double t);
double bump_derivative(const BumpSpec& spec, double t);

// Mass over the support, composite Simpson at high resolution. For a
// unit_bump this returns 1 up to quadrature accuracy.
double bump_mass(const BumpSpec& spec);

}  // namespace corner

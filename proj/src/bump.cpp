#include "corner/bump.hpp"

#include <cmath>

namespace corner {

namespace {

// exp(-1/(1-s^2)) on (-1,1), identically zero outside.
double flat_profile(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double flat_profile_ds(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q) * (-2.0 * s / (q * q));
}

// exp(-1/s) for s > 0, zero otherwise; the one-sided flat factor of the
// smooth step.
double onesided(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double onesided_ds(double s) {
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s) / (s * s);
}

// Smooth step, 1 at sigma=0 down to 0 at sigma=1.
double smooth_step(double sigma) {
  if (sigma <= 0.0) return 1.0;
  if (sigma >= 1.0) return 0.0;
  const double f = onesided(1.0 - sigma);
  const double g = onesided(sigma);
  return f / (f + g);
}

double smooth_step_ds(double sigma) {
  if (sigma <= 0.0 || sigma >= 1.0) return 0.0;
  const double f = onesided(1.0 - sigma);
  const double g = onesided(sigma);
  const double fp = -onesided_ds(1.0 - sigma);
  const double gp = onesided_ds(sigma);
  const double denom = f + g;
  return (fp * g - f * gp) / (denom * denom);
}

double simpson(double lo, double hi, int intervals, double (*f)(double, const BumpSpec&),
               const BumpSpec& spec) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo, spec) + f(hi, spec);
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h, spec) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

double raw_value(double t, const BumpSpec& spec) {
  const double s = (2.0 * t - spec.a - spec.b) / (spec.b - spec.a);
  return flat_profile(s);
}

}  // namespace

BumpSpec unit_bump(double a, double b) {
  if (!(a < b)) throw ParameterError("unit_bump: requires a < b");
  BumpSpec spec{BumpKind::unit_bump, a, b, 1.0};
  const double mass = simpson(a, b, 10000, raw_value, spec);
  spec.scale = 1.0 / mass;
  return spec;
}

BumpSpec cutoff(double t1, double t2) {
  if (!(t1 < t2)) throw ParameterError("cutoff: requires t1 < t2");
  return BumpSpec{BumpKind::cutoff, t1, t2, 1.0};
}

BumpSpec mollifier(double eps) {
  if (!(eps > 0.0)) throw ParameterError("mollifier: requires eps > 0");
  return BumpSpec{BumpKind::mollifier, eps / 2.0, eps, 1.0};
}

double eval_bump(const BumpSpec& spec, double t) {
  switch (spec.kind) {
    case BumpKind::unit_bump:
      return spec.scale * raw_value(t, spec);
    case BumpKind::cutoff:
    case BumpKind::mollifier:
      return smooth_step((t - spec.a) / (spec.b - spec.a));
  }
  return 0.0;
}

double bump_derivative(const BumpSpec& spec, double t) {
  switch (spec.kind) {
    case BumpKind::unit_bump: {
      const double w = spec.b - spec.a;
      const double s = (2.0 * t - spec.a - spec.b) / w;
      return spec.scale * flat_profile_ds(s) * (2.0 / w);
    }
    case BumpKind::cutoff:
    case BumpKind::mollifier: {
      const double w = spec.b - spec.a;
      return smooth_step_ds((t - spec.a) / w) / w;
    }
  }
  return 0.0;
}

double bump_mass(const BumpSpec& spec) {
  const auto value = [](double t, const BumpSpec& s) { return eval_bump(s, t); };
  if (spec.kind == BumpKind::unit_bump) return simpson(spec.a, spec.b, 10000, value, spec);
  // Cutoff and mollifier are 1 below the first knee; mass is over [0, inf).
  const double lo = spec.a > 0.0 ? spec.a : 0.0;
  return lo + simpson(lo, spec.b, 10000, value, spec);
}

}  // namespace corner

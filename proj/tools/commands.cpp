#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "corner/densexpr.hpp"
#include "corner/io.hpp"
#include "corner/verify.hpp"

namespace corner::cli {

namespace {

nlohmann::json section(const nlohmann::json& cfg, const std::string& name) {
  if (cfg.contains(name)) return cfg.at(name);
  return nlohmann::json::object();
}

template <class T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

Grid grid_from_config(const nlohmann::json& cfg) {
  const auto dom = section(cfg, "domain");
  const auto grd = section(cfg, "grid");
  const int m = get_or<int>(dom, "m", 2);
  const std::string kind = get_or<std::string>(dom, "kind", "cube");

  Domain domain;
  if (kind == "cube") {
    domain = Domain::cube(m);
  } else if (kind == "quadrant") {
    const int p = get_or<int>(dom, "p", m);
    std::array<double, 3> length{1.0, 1.0, 1.0};
    if (dom.contains("length")) {
      const auto len = dom.at("length").get<std::vector<double>>();
      if (static_cast<int>(len.size()) != m)
        throw ConfigError("domain.length needs one entry per axis");
      for (int a = 0; a < m; ++a) length[a] = len[a];
    }
    domain = Domain::quadrant(m, p, length);
  } else {
    throw ConfigError("domain.kind must be 'cube' or 'quadrant'");
  }

  std::vector<int> n;
  if (grd.contains("n")) {
    if (grd.at("n").is_array())
      n = grd.at("n").get<std::vector<int>>();
    else
      n.assign(m, grd.at("n").get<int>());
  } else {
    n.assign(m, 33);
  }
  if (static_cast<int>(n.size()) != m) throw ConfigError("grid.n needs one entry per axis");
  return make_grid(domain, n);
}

void write_report(const RunOptions& opt, const std::string& name, const nlohmann::json& report) {
  std::filesystem::create_directories(opt.out_dir);
  const std::string path = opt.out_dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << report.dump(2) << "\n";
  if (opt.verbosity > 0) std::cout << report.dump(2) << std::endl;
}

std::string out_prefix(const nlohmann::json& cfg) {
  return get_or<std::string>(section(cfg, "output"), "prefix", std::string("run"));
}

double max_spacing(const Grid& grid) {
  double h = 0.0;
  for (int a = 0; a < grid.m(); ++a) h = std::max(h, grid.spacing[a]);
  return h;
}

}  // namespace

int cmd_stokes(const nlohmann::json& cfg, const RunOptions& opt) {
  const Grid grid = grid_from_config(cfg);
  const int m = grid.m();
  const auto form_cfg = section(cfg, "form");
  if (!form_cfg.contains("components"))
    throw ConfigError("stokes needs form.components (one expression per du^i)");
  const auto exprs = form_cfg.at("components").get<std::vector<std::string>>();
  if (static_cast<int>(exprs.size()) != comp_count(m, m - 1))
    throw ConfigError("stokes needs " + std::to_string(comp_count(m, m - 1)) +
                      " component expressions");

  FormField omega(grid, m - 1);
  for (std::size_t c = 0; c < exprs.size(); ++c)
    omega.comp[c] = sample(parse_expr(exprs[c]), grid).values;

  const StokesResult res = stokes_check(omega);
  const double tol = get_or<double>(section(cfg, "tolerances"), "stokes",
                                    25.0 * max_spacing(grid) * max_spacing(grid));
  const bool pass = res.residual <= tol;

  nlohmann::json rep;
  rep["command"] = "stokes";
  rep["lhs"] = res.lhs;
  rep["rhs"] = res.rhs;
  rep["residual"] = res.residual;
  rep["tolerance"] = tol;
  rep["pass"] = pass;
  write_report(opt, out_prefix(cfg) + "_stokes.json", rep);
  return pass ? 0 : 1;
}

int cmd_banyaga_check(const nlohmann::json& cfg, const RunOptions& opt) {
  const Grid grid = grid_from_config(cfg);
  const unsigned seed = get_or<unsigned>(section(cfg, "check"), "seed", 1u);
  const double h = max_spacing(grid);

  const OperatorCheck chk = grid.domain.kind == DomainKind::cube
                                ? operator_check_cube(grid, seed, opt.exec)
                                : operator_check_quadrant(grid, seed, opt.exec);

  const auto tols = section(cfg, "tolerances");
  const double tol_identity = get_or<double>(tols, "identity", 100.0 * h * h);
  const double tol_trace = get_or<double>(tols, "trace", 10.0 * h * h);
  const double tol_linear = get_or<double>(tols, "linearity", 1e-12);
  const double tol_support = get_or<double>(tols, "support", 1e-10);

  const bool pass = chk.identity_sup <= tol_identity && chk.trace_sup <= tol_trace &&
                    chk.linearity_sup <= tol_linear && chk.support_leak <= tol_support;

  nlohmann::json rep;
  rep["command"] = "banyaga-check";
  rep["identity_sup"] = chk.identity_sup;
  rep["trace_sup"] = chk.trace_sup;
  rep["boundary_sup"] = chk.boundary_sup;
  rep["linearity_sup"] = chk.linearity_sup;
  rep["support_leak"] = chk.support_leak;
  rep["tolerances"] = {{"identity", tol_identity},
                       {"trace", tol_trace},
                       {"linearity", tol_linear},
                       {"support", tol_support}};
  rep["pass"] = pass;
  write_report(opt, out_prefix(cfg) + "_banyaga.json", rep);
  return pass ? 0 : 1;
}

int cmd_match(const nlohmann::json& cfg, const RunOptions& opt) {
  const Grid grid = grid_from_config(cfg);
  const auto dens = section(cfg, "densities");
  if (!dens.contains("mu0") || !dens.contains("mu1"))
    throw ConfigError("match needs densities.mu0 and densities.mu1");

  FormField mu0(grid, grid.m()), mu1(grid, grid.m());
  mu0.comp[0] = sample_positive(parse_expr(dens.at("mu0").get<std::string>()), grid).values;
  mu1.comp[0] = sample_positive(parse_expr(dens.at("mu1").get<std::string>()), grid).values;
  if (get_or<bool>(dens, "normalize", false)) {
    const double target = integrate_top(mu0);
    mu1 *= target / integrate_top(mu1);
  }
  const DensityPath path = build_path(mu0, mu1);

  FormField psi;
  if (grid.domain.kind == DomainKind::cube) {
    const auto bump = section(cfg, "bump");
    const Atlas atlas = cube_atlas(grid, get_or<double>(bump, "delta", 0.45),
                                   get_or<double>(bump, "halfwidth", 0.35));
    psi = solve_psi(path, atlas, opt.exec);
  } else {
    psi = solve_psi(path, default_reference(grid), grid.domain.p, opt.exec);
  }

  const int steps = get_or<int>(section(cfg, "flow"), "steps", 100);
  const TimeVectorField tvf = build_time_field(psi, path, steps);
  const FlowMap flow = integrate_flow(tvf, all_nodes(grid), steps, opt.exec);
  const ResidualReport res = pullback_residual(flow, path);
  const BoundaryReport bnd = boundary_identity_check(flow, path);

  const auto tols = section(cfg, "tolerances");
  const double tol_res = get_or<double>(tols, "residual_sup", 1e-2);
  const double tol_mass = get_or<double>(tols, "mass_error", 1e-3);
  const bool pass = res.sup <= tol_res && res.mass_error <= tol_mass && res.min_det > 0.0;

  std::filesystem::create_directories(opt.out_dir);
  const std::string prefix = opt.out_dir + "/" + out_prefix(cfg);
  write_map_csv(prefix + "_map.csv", flow, res.residual);

  nlohmann::json rep;
  rep["command"] = "match";
  rep["grid"] = std::vector<int>(grid.n.begin(), grid.n.begin() + grid.m());
  rep["steps"] = steps;
  rep["mass"] = path.mass;
  rep["renormalization"] = path.renormalization;
  rep["residual_sup"] = res.sup;
  rep["residual_l1"] = res.l1;
  rep["mass_error"] = res.mass_error;
  rep["mass_transported"] = res.mass_out;
  rep["min_det"] = res.min_det;
  rep["det_estimator_gap"] = res.det_estimator_gap;
  rep["boundary"] = {{"applicable", bnd.applicable},
                     {"max_displacement", bnd.max_displacement},
                     {"max_face_distance", bnd.max_face_distance},
                     {"max_corner_displacement", bnd.max_corner_displacement}};
  rep["tolerances"] = {{"residual_sup", tol_res}, {"mass_error", tol_mass}};
  rep["map_csv"] = prefix + "_map.csv";

  // Optional refinement study attached to the run report.
  const auto conv = section(cfg, "convergence");
  if (conv.contains("study")) {
    StudyParams params;
    params.exec = opt.exec;
    params.rk_steps = steps;
    const ConvergenceReport study = convergence_study(
        conv.at("study").get<std::string>(),
        conv.contains("grids") ? conv.at("grids").get<std::vector<int>>()
                               : std::vector<int>{33, 65, 129},
        params);
    rep["convergence"] = {{"study", study.study},
                          {"grids", study.grids},
                          {"residuals", study.residuals},
                          {"orders", study.orders},
                          {"fitted_order", study.fitted_order},
                          {"exact", study.exact}};
  }

  rep["pass"] = pass;
  write_report(opt, out_prefix(cfg) + "_report.json", rep);
  return pass ? 0 : 1;
}

int cmd_convergence(const nlohmann::json& cfg, const RunOptions& opt) {
  const auto conv = section(cfg, "convergence");
  if (!conv.contains("study")) throw ConfigError("convergence needs convergence.study");
  const std::string study = conv.at("study").get<std::string>();
  std::vector<int> grids = conv.contains("grids") ? conv.at("grids").get<std::vector<int>>()
                                                  : std::vector<int>{33, 65, 129};
  StudyParams params;
  params.exec = opt.exec;
  params.seed = get_or<unsigned>(section(cfg, "check"), "seed", 1u);
  params.rk_steps = get_or<int>(section(cfg, "flow"), "steps", 0);

  const ConvergenceReport rep = convergence_study(study, grids, params);

  nlohmann::json out;
  out["command"] = "convergence";
  out["study"] = rep.study;
  out["grids"] = rep.grids;
  out["residuals"] = rep.residuals;
  out["orders"] = rep.orders;
  out["fitted_order"] = rep.fitted_order;
  out["exact"] = rep.exact;
  out["monotone"] = rep.monotone;

  bool pass = true;
  if (conv.contains("min_order")) {
    const double gate = conv.at("min_order").get<double>();
    pass = rep.exact || rep.fitted_order >= gate;
    out["min_order"] = gate;
  }
  out["pass"] = pass;
  write_report(opt, out_prefix(cfg) + "_convergence.json", out);
  return pass ? 0 : 1;
}

}  // namespace corner::cli

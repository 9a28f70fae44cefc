#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "corner/errors.hpp"
#include "corner/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"corner-moser: volume-matching flows and boundary-integral checks on boxes "
               "and partial quadrants"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML or JSON run configuration")->required();
    sub->add_option("--out-dir", out_dir, "directory for reports and CSV output");
    sub->add_option("--threads", threads, "worker threads (results do not depend on this)");
  };

  CLI::App* stokes = app.add_subcommand("stokes", "boundary-integral identity check");
  CLI::App* banyaga = app.add_subcommand("banyaga-check", "primitive-operator residual suite");
  CLI::App* match = app.add_subcommand("match", "density-matching diffeomorphism pipeline");
  CLI::App* conv = app.add_subcommand("convergence", "named grid-refinement study");
  for (CLI::App* sub : {stokes, banyaga, match, conv}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  corner::cli::RunOptions opt;
  opt.out_dir = out_dir;
  if (threads > 0) corner::set_threads(threads);
  if (const char* log = std::getenv("CORNER_MOSER_LOG")) opt.verbosity = std::atoi(log);

  try {
    const nlohmann::json cfg = corner::cli::load_config(config_path);
    if (stokes->parsed()) return corner::cli::cmd_stokes(cfg, opt);
    if (banyaga->parsed()) return corner::cli::cmd_banyaga_check(cfg, opt);
    if (match->parsed()) return corner::cli::cmd_match(cfg, opt);
    if (conv->parsed()) return corner::cli::cmd_convergence(cfg, opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const corner::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

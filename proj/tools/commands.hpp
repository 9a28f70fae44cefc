#pragma once

#include <string>

#include "corner/parallel.hpp"
#include "json.hpp"

namespace corner::cli {

struct RunOptions {
  std::string out_dir = ".";
  corner::Exec exec = corner::Exec::openmp;
  int verbosity = 0;
};

// Exit codes: 0 pass, 1 tolerance failure, 2 config/input error (raised as
// exceptions and mapped by the caller).
int cmd_stokes(const nlohmann::json& cfg, const RunOptions& opt);
int cmd_banyaga_check(const nlohmann::json& cfg, const RunOptions& opt);
int cmd_match(const nlohmann::json& cfg, const RunOptions& opt);
int cmd_convergence(const nlohmann::json& cfg, const RunOptions& opt);

}  // namespace corner::cli

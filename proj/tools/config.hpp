#pragma once

#include <string>

#include "json.hpp"

namespace corner::cli {

// Run configuration, loaded from TOML (flat tables of scalars and arrays) or
// JSON with the same shape. The parsed tree is handed around as JSON.
nlohmann::json load_config(const std::string& path);
nlohmann::json parse_toml_subset(const std::string& text);

}  // namespace corner::cli

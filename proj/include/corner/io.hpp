#pragma once

#include <string>

#include "corner/forms.hpp"
#include "corner/moser.hpp"

namespace corner {

// Field exchange format: CSV rows `axis1,...,axism,component,value` plus a
// JSON sidecar describing the grid (written next to the CSV as
// `<path>.json`). Values are printed with 17 significant digits so a
// write/read round trip is exact.
void write_form_csv(const std::string& path, const FormField& form);
FormField read_form_csv(const std::string& path);

// Map output: one row per seed, `x1..xm,phi1..phim,detJ,residual`.
void write_map_csv(const std::string& path, const FlowMap& flow,
                   const std::vector<double>& residual);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace corner

#include "corner/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace corner {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json domain_descriptor(const Grid& grid) {
  nlohmann::json j;
  j["kind"] = grid.domain.kind == DomainKind::cube ? "cube" : "quadrant";
  j["m"] = grid.domain.m;
  j["p"] = grid.domain.p;
  j["n"] = std::vector<int>(grid.n.begin(), grid.n.begin() + grid.domain.m);
  j["length"] =
      std::vector<double>(grid.domain.length.begin(), grid.domain.length.begin() + grid.domain.m);
  return j;
}

Grid grid_from_descriptor(const nlohmann::json& j) {
  const int m = j.at("m").get<int>();
  std::array<double, 3> length{1.0, 1.0, 1.0};
  const auto len = j.at("length").get<std::vector<double>>();
  for (int a = 0; a < m; ++a) length[a] = len.at(a);
  const Domain domain = j.at("kind").get<std::string>() == "cube"
                            ? Domain::cube(m)
                            : Domain::quadrant(m, j.at("p").get<int>(), length);
  return make_grid(domain, j.at("n").get<std::vector<int>>());
}

}  // namespace

void write_form_csv(const std::string& path, const FormField& form) {
  const Grid& grid = form.grid;
  const int m = grid.m();
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (int a = 0; a < m; ++a) out << "axis" << a + 1 << ",";
  out << "component,value\n";
  for (std::size_t c = 0; c < form.comp.size(); ++c)
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto x = grid.point(k);
      for (int a = 0; a < m; ++a) out << fmt(x[a]) << ",";
      out << c << "," << fmt(form.comp[c][k]) << "\n";
    }

  nlohmann::json side = domain_descriptor(grid);
  side["degree"] = form.degree;
  side["components"] = form.comp.size();
  std::ofstream sout(path + ".json");
  if (!sout) throw ConfigError("cannot write " + path + ".json");
  sout << side.dump(2) << "\n";
}

FormField read_form_csv(const std::string& path) {
  std::ifstream sin(path + ".json");
  if (!sin) throw ConfigError("cannot read " + path + ".json");
  nlohmann::json side;
  sin >> side;
  const Grid grid = grid_from_descriptor(side);
  FormField form(grid, side.at("degree").get<int>());

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::string line;
  std::getline(in, line);  // header
  const int m = grid.m();
  const std::size_t per_comp = grid.size();
  std::vector<std::size_t> filled(form.comp.size(), 0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (int a = 0; a < m; ++a) std::getline(ss, cell, ',');  // coordinates are implied
    std::getline(ss, cell, ',');
    const std::size_t c = std::stoul(cell);
    std::getline(ss, cell, ',');
    form.comp.at(c).at(filled.at(c)++) = std::stod(cell);
    ++rows;
  }
  if (rows != per_comp * form.comp.size())
    throw ConfigError("field file " + path + " has the wrong number of rows");
  return form;
}

void write_map_csv(const std::string& path, const FlowMap& flow,
                   const std::vector<double>& residual) {
  const int m = flow.grid.m();
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (int a = 0; a < m; ++a) out << "x" << a + 1 << ",";
  for (int a = 0; a < m; ++a) out << "phi" << a + 1 << ",";
  out << "detJ,residual\n";
  for (std::size_t s = 0; s < flow.seeds.size(); ++s) {
    const auto x = flow.grid.point(flow.seeds[s]);
    for (int a = 0; a < m; ++a) out << fmt(x[a]) << ",";
    for (int a = 0; a < m; ++a) out << fmt(flow.endpoint[s][a]) << ",";
    out << fmt(flow.det_variational[s]) << ","
        << fmt(s < residual.size() ? residual[s] : 0.0) << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace corner

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "corner/io.hpp"
#include "doctest.h"

using namespace corner;

TEST_CASE("form CSV round trip is exact") {
  const Grid g = make_grid(Domain::quadrant(2, 1, {1.5, 2.0}), {5, 7});
  FormField f(g, 1);
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (auto& c : f.comp)
    for (auto& v : c) v = uni(rng);

  const std::string path = std::filesystem::temp_directory_path() / "corner_form_test.csv";
  write_form_csv(path, f);
  const FormField back = read_form_csv(path);
  CHECK(back.degree == 1);
  CHECK(back.grid.same_lattice(g));
  CHECK(back.grid.domain.p == 1);
  CHECK(sup_diff(back, f) == 0.0);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("map CSV has one row per seed") {
  const Grid g = make_grid(Domain::cube(1), {5});
  FlowMap flow;
  flow.grid = g;
  flow.seeds = {0, 1, 2, 3, 4};
  flow.full_grid = true;
  for (int i = 0; i < 5; ++i) {
    flow.endpoint.push_back({g.coord(0, i), 0, 0});
    flow.det_variational.push_back(1.0);
  }
  const std::string path = std::filesystem::temp_directory_path() / "corner_map_test.csv";
  write_map_csv(path, flow, std::vector<double>(5, 0.0));
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 6);  // header + 5 seeds
  std::remove(path.c_str());
}

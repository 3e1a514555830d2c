#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "synsearch/error.hpp"
#include "synsearch/synergy_map.hpp"

using namespace synsearch;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("synsearch_test_" + name);
}

}  // namespace

TEST_CASE("poisson maps have no synergy") {
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = GridDomain::make(-0.5, 0.5, 9);
  std::vector<double> w(g.size());
  for (double& x : w) x = 0.05 + u(gen);
  const auto field = ProbabilityField::from_weights(g, w);
  const auto model = SourceModel::poisson(g, PoissonSource::make(1.5, DetectionKernel::make(0.4)));
  const auto map = compute_synergy_map(field, model, g.index(2, 4));
  REQUIRE(map.values.size() == g.size());
  for (const auto& v : map.values) {
    CHECK(v.R >= -1e-12);
    CHECK(std::abs(v.R - v.I) <= 1e-12);
    CHECK(std::abs(v.I_cond) <= 1e-12);
  }
}

TEST_CASE("map values agree with the entropy route") {
  const auto g = GridDomain::make(-0.5, 0.5, 7);
  const auto field = gaussian_prior(g, {0.0, 0.0}, 0.05);
  const auto model = SourceModel::angular(AngularSource::make(g, 1.1, DetectionKernel::make(0.005)));
  const Cell r1 = g.index(1, 3);
  const auto map = compute_synergy_map(field, model, r1);
  for (Cell r2 = 0; r2 < g.size(); ++r2) {
    const auto joint = build_joint(field, model, r1, r2);
    const auto& v = map.values[r2];
    CHECK(std::abs(v.I - oracle::mi_2d(oracle::pair_table(joint))) <= 1e-12);
    CHECK(std::abs(v.I_cond - oracle::cmi_entropies(joint)) <= 1e-12);
    CHECK(std::abs(v.R - (v.I - v.I_cond)) <= 1e-15);
  }
}

TEST_CASE("angular factorization on a 26x26 map") {
  // Each two-particle table entry is a product of two Bernoulli factors for fixed r0,
  // so the conditional term vanishes and R equals I.
  const auto g = GridDomain::make(-0.5, 0.5, 26);
  const auto field = gaussian_prior(g, {0.0, 0.0}, 0.02);
  const auto model = SourceModel::angular(AngularSource::make(g, 1.1, DetectionKernel::make(0.002)));
  const auto map = compute_synergy_map(field, model, g.nearest_cell({-0.2, 0.0}));
  const auto ext = map_extrema(map);
  CHECK(ext.max_I > 0.0);
  CHECK(ext.max_I_cond <= 1e-12);
  CHECK(ext.min_R >= -1e-12);
  for (const auto& v : map.values) CHECK(std::abs(v.R - v.I) <= 1e-12);
}

TEST_CASE("co-location handling") {
  const auto g = GridDomain::make(-0.5, 0.5, 5);
  const auto field = uniform_prior(g);
  const auto model = SourceModel::angular(AngularSource::make(g, 1.1, DetectionKernel::make(0.01)));
  const Cell r1 = g.index(1, 2);
  const auto on = compute_synergy_map(field, model, r1, true);
  CHECK(std::isfinite(on.values[r1].R));
  CHECK(on.metadata["colocated_cell_computed"] == true);
  const auto off = compute_synergy_map(field, model, r1, false);
  CHECK(std::isnan(off.values[r1].R));
  CHECK(off.metadata["colocated_cell_computed"] == false);
  const auto ext = map_extrema(off);
  CHECK(std::isfinite(ext.min_R));
}

TEST_CASE("extrema") {
  SynergyMap map{GridDomain::make(-0.5, 0.5, 2), 0, std::vector<SynergyValues>(4), {}};
  auto ext = map_extrema(map);
  CHECK(ext.min_R == 0.0);
  CHECK(ext.max_abs_R == 0.0);
  CHECK(ext.min_R_cell == 0);

  map.values[2].R = -3e-5;
  map.values[3].R = 1e-5;
  ext = map_extrema(map);
  CHECK(ext.min_R_cell == 2);
  CHECK(ext.max_abs_R_cell == 2);
  CHECK(ext.max_R == 1e-5);

  for (auto& v : map.values) v.R = std::nan("");
  CHECK_THROWS_AS(map_extrema(map), Error);
}

TEST_CASE("export and import") {
  const auto g = GridDomain::make(-0.5, 0.5, 51);
  std::mt19937_64 gen(67);
  std::uniform_real_distribution<double> u(-1e-4, 1e-4);
  SynergyMap map{g, g.nearest_cell({-0.2, 0.0}), std::vector<SynergyValues>(g.size()), {}};
  for (auto& v : map.values) {
    v.I = std::abs(u(gen));
    v.I_cond = std::abs(u(gen)) * 1e-3;
    v.R = v.I - v.I_cond;
  }
  const auto model = SourceModel::angular(AngularSource::make(
      GridDomain::make(-0.5, 0.5, 5), 1.1, DetectionKernel::make(0.002)));
  map.metadata["model"] = describe_model(model);

  const auto path = temp_file("map.csv");
  export_map(map, path);
  const auto back = import_map_values(g, path);
  REQUIRE(back.size() == g.size());
  for (Cell c = 0; c < g.size(); ++c) {
    CHECK(back[c].R == map.values[c].R);
    CHECK(back[c].I == map.values[c].I);
    CHECK(back[c].I_cond == map.values[c].I_cond);
  }

  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  std::getline(in, line);
  CHECK(line == "x,y,R,I,I_cond");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2601);

  std::ifstream meta_in(sidecar_path(path));
  const auto meta = nlohmann::json::parse(meta_in);
  CHECK(meta["model"]["sigma2"].get<double>() == 1.1);

  std::ostringstream a, b;
  write_map_csv(map, a);
  write_map_csv(map, b);
  CHECK(a.str() == b.str());

  std::filesystem::remove(path);
  std::filesystem::remove(sidecar_path(path));
}

TEST_CASE("import rejects malformed files") {
  const auto g = GridDomain::make(-0.5, 0.5, 3);
  const auto path = temp_file("bad.csv");
  {
    std::ofstream out(path);
    out << "x,y,R,I,I_cond\n0,0,1,2\n";
  }
  CHECK_THROWS_AS(import_map_values(g, path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(import_map_values(g, temp_file("missing.csv")), Error);
}

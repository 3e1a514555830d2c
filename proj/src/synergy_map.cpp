#include "synsearch/synergy_map.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "synsearch/error.hpp"
#include "synsearch/info_metrics.hpp"
#include "synsearch/parallel.hpp"
#include "synsearch/version.hpp"
#include "text_format.hpp"

namespace synsearch {

nlohmann::json describe_model(const SourceModel& model) {
  if (const auto* p = model.as_poisson()) {
    return {{"type", "poisson"},
            {"lambda0", p->lambda0()},
            {"amplitude", p->kernel().amplitude()},
            {"epsilon", p->epsilon()}};
  }
  const auto& a = *model.as_angular();
  return {{"type", "angular"}, {"sigma2", a.sigma2()}, {"amplitude", a.kernel().amplitude()}};
}

SynergyMap compute_synergy_map(const ProbabilityField& field, const SourceModel& model, Cell r1,
                               bool allow_colocation) {
  const auto& grid = model.grid();
  if (r1 >= grid.size()) throw Error(ErrorCode::off_grid, "searcher 1 lies outside the grid");
  if (!(field.grid() == grid)) {
    throw Error(ErrorCode::invalid_parameter, "field and model use different grids");
  }

  SynergyMap map{grid, r1, std::vector<SynergyValues>(grid.size()), {}};
  parallel_for(grid.size(), [&](std::size_t r2) {
    if (!allow_colocation && r2 == r1) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      map.values[r2] = {nan, nan, nan};
      return;
    }
    const auto joint = build_joint(field, model, r1, r2);
    const double info = mutual_information(joint, Axis::first, Axis::second);
    const double cond = conditional_mutual_information(joint);
    map.values[r2] = {info - cond, info, cond};
  });

  const Coord at = grid.center(r1);
  map.metadata = {
      {"model", describe_model(model)},
      {"grid",
       {{"min", grid.extent_min()}, {"max", grid.extent_max()},
        {"cells_per_axis", grid.cells_per_axis()}}},
      {"r1", {at.x, at.y}},
      {"colocated_cell_computed", allow_colocation},
      {"version", kVersion},
  };
  return map;
}

MapExtrema map_extrema(const SynergyMap& map) {
  MapExtrema e;
  bool any = false;
  for (Cell c = 0; c < map.values.size(); ++c) {
    const auto& v = map.values[c];
    if (std::isnan(v.R)) continue;
    if (!any) {
      e = {c, v.R, c, std::abs(v.R), v.R, v.I, v.I, v.I_cond, v.I_cond};
      any = true;
      continue;
    }
    if (v.R < e.min_R) {
      e.min_R = v.R;
      e.min_R_cell = c;
    }
    if (std::abs(v.R) > e.max_abs_R) {
      e.max_abs_R = std::abs(v.R);
      e.max_abs_R_cell = c;
    }
    e.max_R = std::max(e.max_R, v.R);
    e.min_I = std::min(e.min_I, v.I);
    e.max_I = std::max(e.max_I, v.I);
    e.min_I_cond = std::min(e.min_I_cond, v.I_cond);
    e.max_I_cond = std::max(e.max_I_cond, v.I_cond);
  }
  if (!any) throw Error(ErrorCode::invalid_parameter, "synergy map has no computed cells");
  return e;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta.json");
}

void write_map_csv(const SynergyMap& map, std::ostream& out) {
  out << "x,y,R,I,I_cond\n";
  for (Cell c = 0; c < map.values.size(); ++c) {
    const Coord xy = map.grid.center(c);
    const auto& v = map.values[c];
    out << detail::format_g17(xy.x) << ',' << detail::format_g17(xy.y) << ','
        << detail::format_g17(v.R) << ',' << detail::format_g17(v.I) << ','
        << detail::format_g17(v.I_cond) << '\n';
  }
}

void export_map(const SynergyMap& map, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
    write_map_csv(map, out);
    if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
  }
  std::ofstream meta(sidecar_path(path), std::ios::binary);
  if (!meta) throw Error(ErrorCode::io_failure, "cannot write " + sidecar_path(path).string());
  meta << map.metadata.dump(2) << '\n';
}

std::vector<SynergyValues> import_map_values(const GridDomain& grid,
                                             const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (detail::split_csv_line(line) !=
      std::vector<std::string_view>{"x", "y", "R", "I", "I_cond"}) {
    throw Error(ErrorCode::io_failure, path.string() + ": expected header x,y,R,I,I_cond");
  }
  std::vector<SynergyValues> values(grid.size());
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = detail::split_csv_line(line);
    if (cols.size() != 5) throw Error(ErrorCode::io_failure, "malformed row: " + line);
    const Cell c = grid.nearest_cell({detail::parse_double(cols[0]), detail::parse_double(cols[1])});
    values[c] = {detail::parse_double(cols[2]), detail::parse_double(cols[3]),
                 detail::parse_double(cols[4])};
    ++rows;
  }
  if (rows != grid.size()) throw Error(ErrorCode::io_failure, path.string() + ": wrong row count");
  return values;
}

}  // namespace synsearch

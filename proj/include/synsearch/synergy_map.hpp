#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "synsearch/field.hpp"
#include "synsearch/source_models.hpp"

namespace synsearch {

struct SynergyValues {
  double R = 0.0;
  double I = 0.0;       // I(H1; H2)
  double I_cond = 0.0;  // I(H1; H2 | R0)
};

/// R, I and I_cond for searcher 2 placed at each cell, searcher 1 fixed.
/// Cells skipped because co-location is forbidden hold NaN.
struct SynergyMap {
  GridDomain grid;
  Cell r1 = 0;
  std::vector<SynergyValues> values;
  /// Model, grid, r1 and co-location settings; callers may add a prior description.
  nlohmann::json metadata;
};

nlohmann::json describe_model(const SourceModel& model);

SynergyMap compute_synergy_map(const ProbabilityField& field, const SourceModel& model, Cell r1,
                               bool allow_colocation = true);

struct MapExtrema {
  Cell min_R_cell = 0;
  double min_R = 0.0;
  Cell max_abs_R_cell = 0;
  double max_abs_R = 0.0;
  double max_R = 0.0;
  double min_I = 0.0;
  double max_I = 0.0;
  double min_I_cond = 0.0;
  double max_I_cond = 0.0;
};

/// Extrema over computed (non-NaN) cells. Throws invalid-parameter on an empty map.
MapExtrema map_extrema(const SynergyMap& map);

void write_map_csv(const SynergyMap& map, std::ostream& out);

/// Writes `path` (CSV: x,y,R,I,I_cond, row-major, 17 significant digits) and
/// the sidecar `path` + ".meta.json".
void export_map(const SynergyMap& map, const std::filesystem::path& path);

/// Reads the CSV written by export_map back into per-cell values.
std::vector<SynergyValues> import_map_values(const GridDomain& grid,
                                             const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace synsearch

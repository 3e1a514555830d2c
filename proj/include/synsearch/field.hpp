#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "synsearch/grid.hpp"
#include "synsearch/measurement.hpp"

namespace synsearch {

class SourceModel;

/// Normalized, non-negative probability mass over the cells of a grid.
/// Immutable once built; every operation returns a new field.
class ProbabilityField {
 public:
  /// Normalizes non-negative weights. Throws zero-evidence if they sum to 0.
  static ProbabilityField from_weights(const GridDomain& grid, std::vector<double> weights);
  /// Keeps the values as given; they must already be non-negative and sum to
  /// 1 within 1e-12.
  static ProbabilityField from_normalized(const GridDomain& grid, std::vector<double> values);

  const GridDomain& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](Cell cell) const { return values_[cell]; }
  std::size_t size() const { return values_.size(); }

 private:
  ProbabilityField(GridDomain grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {}

  GridDomain grid_;
  std::vector<double> values_;
};

ProbabilityField uniform_prior(const GridDomain& grid);

/// Mass proportional to exp(-|r - center|^2 / variance).
ProbabilityField gaussian_prior(const GridDomain& grid, Coord center, double variance);

/// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(std::span<const double> masses);
inline double entropy(const ProbabilityField& field) { return entropy(field.values()); }

/// Posterior proportional to prior * likelihood (one likelihood value per cell).
/// Throws zero-evidence when no cell with prior mass has nonzero likelihood.
ProbabilityField bayes_update(const ProbabilityField& field, std::span<const double> likelihood);
ProbabilityField bayes_update(const ProbabilityField& field, const Measurement& meas,
                              const SourceModel& model);

/// Conditions on "the source is not at any of these cells".
ProbabilityField exclude_cells(const ProbabilityField& field, std::span<const Cell> cells);

/// CSV with header `x,y,p`, row-major in y then x, 17 significant digits.
void write_field_csv(const ProbabilityField& field, const std::filesystem::path& path);
ProbabilityField read_field_csv(const GridDomain& grid, const std::filesystem::path& path);

}  // namespace synsearch

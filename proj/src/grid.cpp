#include "synsearch/grid.hpp"

#include <algorithm>
#include <string>

#include "synsearch/error.hpp"

namespace synsearch {

GridDomain GridDomain::make(double extent_min, double extent_max, std::size_t cells_per_axis) {
  if (!std::isfinite(extent_min) || !std::isfinite(extent_max) || !(extent_min < extent_max)) {
    throw Error(ErrorCode::invalid_extent, "extent_min must be below extent_max (got " +
                                               std::to_string(extent_min) + ", " +
                                               std::to_string(extent_max) + ")");
  }
  if (cells_per_axis < 2) {
    throw Error(ErrorCode::too_few_cells,
                "cells_per_axis must be at least 2 (got " + std::to_string(cells_per_axis) + ")");
  }
  return GridDomain(extent_min, extent_max, cells_per_axis);
}

double GridDomain::axis_coord(std::size_t i) const {
  // Exact endpoints and an exactly representable midpoint for odd counts.
  if (i == n_ - 1) return hi_;
  if (2 * i == n_ - 1) return 0.5 * (lo_ + hi_);
  return lo_ + static_cast<double>(i) * (hi_ - lo_) / static_cast<double>(n_ - 1);
}

bool GridDomain::contains(Coord c) const {
  const double half = 0.5 * spacing();
  return c.x >= lo_ - half && c.x <= hi_ + half && c.y >= lo_ - half && c.y <= hi_ + half;
}

Cell GridDomain::nearest_cell(Coord c) const {
  if (!std::isfinite(c.x) || !std::isfinite(c.y) || !contains(c)) {
    throw Error(ErrorCode::off_grid,
                "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ") is outside the grid");
  }
  const auto snap = [&](double v) {
    const double t = std::round((v - lo_) / spacing());
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(n_ - 1)));
  };
  return index(snap(c.x), snap(c.y));
}

}  // namespace synsearch

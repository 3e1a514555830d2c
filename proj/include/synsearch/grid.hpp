#pragma once

#include <cmath>
#include <cstddef>

namespace synsearch {

using Cell = std::size_t;

struct Coord {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

inline double squared_distance(Coord a, Coord b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Square domain [lo, hi]^2 discretized into cells_per_axis^2 cells whose
/// centers are uniformly spaced and include both ends of the extent.
/// Cells are indexed row-major: index = iy * cells_per_axis + ix.
class GridDomain {
 public:
  static GridDomain make(double extent_min, double extent_max, std::size_t cells_per_axis);

  double extent_min() const { return lo_; }
  double extent_max() const { return hi_; }
  std::size_t cells_per_axis() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double spacing() const { return (hi_ - lo_) / static_cast<double>(n_ - 1); }

  double axis_coord(std::size_t i) const;
  Coord center(Cell cell) const { return {axis_coord(cell % n_), axis_coord(cell / n_)}; }
  Cell index(std::size_t ix, std::size_t iy) const { return iy * n_ + ix; }
  std::size_t column(Cell cell) const { return cell % n_; }
  std::size_t row(Cell cell) const { return cell / n_; }

  bool contains(Coord c) const;
  /// Nearest cell center; throws off-grid when c lies outside the extent by
  /// more than half a cell.
  Cell nearest_cell(Coord c) const;

  friend bool operator==(const GridDomain&, const GridDomain&) = default;

 private:
  GridDomain(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {}

  double lo_;
  double hi_;
  std::size_t n_;
};

}  // namespace synsearch

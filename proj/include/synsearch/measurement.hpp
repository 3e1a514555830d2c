#pragma once

#include <vector>

#include "synsearch/grid.hpp"

namespace synsearch {

/// One searcher's observation: where it stood and how many particles it caught.
struct Reading {
  Cell cell = 0;
  unsigned count = 0;

  friend bool operator==(const Reading&, const Reading&) = default;
};

/// Simultaneous readings from all searchers (one or two), in searcher order.
struct Measurement {
  std::vector<Reading> readings;

  std::size_t searchers() const { return readings.size(); }

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

}  // namespace synsearch

#include "synsearch/error.hpp"

namespace synsearch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_extent: return "invalid-extent";
    case ErrorCode::too_few_cells: return "too-few-cells";
    case ErrorCode::off_grid: return "off-grid";
    case ErrorCode::non_positive_variance: return "non-positive-variance";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::zero_evidence: return "zero-evidence";
    case ErrorCode::exclusion_violated: return "exclusion-violated";
    case ErrorCode::coincident_points: return "coincident-points";
    case ErrorCode::probability_overflow: return "probability-overflow";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

}  // namespace synsearch

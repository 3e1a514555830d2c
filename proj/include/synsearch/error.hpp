#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synsearch {

enum class ErrorCode {
  invalid_extent,
  too_few_cells,
  off_grid,
  non_positive_variance,
  invalid_parameter,
  zero_evidence,
  exclusion_violated,
  coincident_points,
  probability_overflow,
  invalid_config,
  io_failure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace synsearch

#pragma once

namespace synsearch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace synsearch

#pragma once

namespace iwv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace iwv

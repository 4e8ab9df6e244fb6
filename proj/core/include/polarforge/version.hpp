#pragma once

namespace polarforge {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

}  // namespace polarforge

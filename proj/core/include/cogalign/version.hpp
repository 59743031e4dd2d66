#pragma once

namespace cogalign {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kGeneratorName = "cogalign";

}  // namespace cogalign

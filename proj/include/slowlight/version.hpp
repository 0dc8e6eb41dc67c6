#pragma once

namespace slowlight {

inline constexpr const char* kToolName = "slowlight";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace slowlight

#pragma once

namespace civicpulse {

inline constexpr const char* kToolName = "civic-pulse";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace civicpulse

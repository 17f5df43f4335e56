#pragma once

namespace mallows {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mallows

#pragma once

namespace circmech {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace circmech

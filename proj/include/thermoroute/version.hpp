#pragma once

namespace thermoroute {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace thermoroute

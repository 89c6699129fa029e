#pragma once

namespace crowdlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crowdlab

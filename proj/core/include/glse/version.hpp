#pragma once

namespace glse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace glse

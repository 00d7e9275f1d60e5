#pragma once

namespace ridgecrest {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ridgecrest

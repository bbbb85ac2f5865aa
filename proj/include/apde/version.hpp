#pragma once

namespace apde {

inline constexpr const char* kVersion = "apde 0.1.0";

}  // namespace apde

#pragma once

namespace mrdcs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mrdcs

#pragma once

namespace radhough {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace radhough

#pragma once

namespace rlsim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace rlsim

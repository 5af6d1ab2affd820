#pragma once

namespace omptk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace omptk

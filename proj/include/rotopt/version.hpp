#pragma once

namespace rotopt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rotopt

#pragma once

namespace latcs {

inline constexpr const char* kVersion = "1.0.0";

} // namespace latcs

#pragma once

namespace pretlab {
inline constexpr const char* kVersion = "0.1.0";
}

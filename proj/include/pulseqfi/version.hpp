#pragma once

namespace pulseqfi {
inline constexpr const char* kVersion = "0.1.0";
}

#pragma once

namespace bjj {
inline constexpr const char* kVersion = "1.0.0";
}

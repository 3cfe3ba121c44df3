#pragma once

namespace cherlb {
inline constexpr const char* kVersion = "0.3.0";
}

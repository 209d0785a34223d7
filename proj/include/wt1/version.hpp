#pragma once

namespace wt1 {
inline constexpr const char* kVersion = "0.1.0";
}

#pragma once

namespace trapmode {
inline constexpr const char* kVersion = "trapmode 1.0.0";
}

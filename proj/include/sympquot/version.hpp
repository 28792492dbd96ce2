#pragma once

namespace sympquot {

inline constexpr const char* tool_version = "0.1.0";

}  // namespace sympquot

#pragma once

namespace qoe {

inline constexpr const char* kVersion = "1.0.0";

} // namespace qoe

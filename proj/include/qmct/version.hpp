#pragma once

namespace qmct {

inline constexpr const char* kVersion = "qmct 1.0.0";

} // namespace qmct

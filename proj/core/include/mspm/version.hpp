#pragma once

namespace mspm {

inline constexpr const char* kVersion = "0.1.0";

} // namespace mspm

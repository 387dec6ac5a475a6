#pragma once

namespace gsc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gsc

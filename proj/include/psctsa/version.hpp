#pragma once

namespace psctsa {

inline constexpr const char* kVersion = "0.1.0";

} // namespace psctsa

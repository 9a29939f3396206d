#pragma once

namespace idnc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace idnc

#pragma once

namespace vw {

inline constexpr const char* code_version = "vwsim 0.1.0";

} // namespace vw

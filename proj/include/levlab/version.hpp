#pragma once

namespace levlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace levlab

#pragma once

namespace fsdim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fsdim

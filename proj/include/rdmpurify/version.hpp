#pragma once

namespace rdmpurify {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rdmpurify

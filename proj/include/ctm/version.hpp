#pragma once

namespace ctm {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ctm

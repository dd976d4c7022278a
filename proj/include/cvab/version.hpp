#pragma once

namespace cvab {
inline constexpr const char* kToolVersion = "0.1.0";
}

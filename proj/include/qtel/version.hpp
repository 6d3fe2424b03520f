#pragma once

namespace qtel {

inline constexpr const char* kVersion = "0.1.0";

// Versioned RNG algorithm identifier; stored in every report so that archived
// outputs stay attributable if the generator ever changes.
inline constexpr const char* kRngId = "philox4x64-10/box-muller/v1";

}  // namespace qtel

#pragma once

namespace phasecs {

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Identifier of the counter-based generator behind all randomness. Recorded in
// matrix fingerprints and reports so outputs are attributable to the exact
// stream semantics.
inline constexpr const char* kRngId = "philox4x32-10";

}  // namespace phasecs

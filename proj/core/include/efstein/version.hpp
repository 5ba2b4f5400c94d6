#pragma once

namespace efstein {

inline constexpr const char* kLibraryVersion = "efstein 0.1.0";

}  // namespace efstein

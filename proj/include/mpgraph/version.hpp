#pragma once

namespace mpgraph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mpgraph

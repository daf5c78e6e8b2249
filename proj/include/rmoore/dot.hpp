/* dot.hpp -- Graphviz text export for table machines */

#pragma once

#include <string>

#include "rmoore/machine.hpp"

namespace rmoore {

/// Deterministic DOT rendering: nodes in state-id order labeled
/// "id / output", one edge per (state, symbol) in alphabet order, start
/// marked with an incoming point.
std::string to_dot(const Machine& m, const std::string& graph_name = "rmoore");

}  // namespace rmoore

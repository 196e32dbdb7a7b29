#pragma once

#include <optional>
#include <string>

#include "knockout/graph.hpp"

namespace knockout {

/// Graphviz text for G_{R,S}. Vertices are named v<index> and labelled with
/// their coordinate tuple; blocks of `structure`, when given, become clusters.
std::string export_dot(const RobustnessGraph& graph, const std::optional<RobustnessStructure>& structure = std::nullopt);

}  // namespace knockout

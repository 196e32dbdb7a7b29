#include "knockout/dot.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace knockout {

namespace {

constexpr std::array<const char*, 8> kPalette = {"lightblue", "lightcoral", "palegreen", "khaki",
                                                 "plum", "lightsalmon", "lightcyan", "wheat"};

void write_vertex(std::ostringstream& os, const StateSpace& space, StateIndex v, const char* indent) {
  os << indent << 'v' << v << " [label=\"" << space.label(v) << "\"];\n";
}

}  // namespace

std::string export_dot(const RobustnessGraph& graph, const std::optional<RobustnessStructure>& structure) {
  std::ostringstream os;
  os << "graph G {\n";
  std::vector<char> clustered(graph.vertices().size(), 0);
  if (structure) {
    for (std::size_t b = 0; b < structure->size(); ++b) {
      os << "  subgraph cluster_" << b << " {\n";
      os << "    style=filled;\n    color=" << kPalette[b % kPalette.size()] << ";\n";
      os << "    label=\"block " << b << "\";\n";
      for (StateIndex v : structure->blocks()[b]) {
        write_vertex(os, graph.space(), v, "    ");
        const auto it = std::lower_bound(graph.vertices().begin(), graph.vertices().end(), v);
        if (it != graph.vertices().end() && *it == v) clustered[static_cast<std::size_t>(it - graph.vertices().begin())] = 1;
      }
      os << "  }\n";
    }
  }
  for (std::size_t i = 0; i < graph.vertices().size(); ++i) {
    if (!clustered[i]) write_vertex(os, graph.space(), graph.vertices()[i], "  ");
  }
  for (const auto& [a, b] : graph.edges()) os << "  v" << a << " -- v" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace knockout

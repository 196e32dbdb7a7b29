#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "knockout/spec.hpp"

namespace knockout {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t i);
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t components_;
};

/// Pairwise adjacency test of G_R: x ~ y iff x ≠ y and some (R, x_R) ∈ spec
/// has x|_R = y|_R = x_R.
class AdjacencyTest {
 public:
  explicit AdjacencyTest(const RobustnessSpec& spec);
  bool operator()(StateIndex x, StateIndex y) const;

 private:
  RobustnessSpec spec_;
  std::vector<NodeSet> subsets_;
};

/// x ~ y in G_{R_k} for equal alphabets, via Hamming(x, y) <= n - k.
bool rk_adjacent_by_hamming(const StateSpace& space, int k, StateIndex x, StateIndex y);

/// The induced subgraph G_{R,S}; simple and undirected.
class RobustnessGraph {
 public:
  using Edge = std::pair<StateIndex, StateIndex>;

  RobustnessGraph(StateSpace space, std::vector<StateIndex> vertices, std::vector<Edge> edges);

  const StateSpace& space() const { return space_; }
  /// Sorted vertex set S.
  const std::vector<StateIndex>& vertices() const { return vertices_; }
  /// Edges (a, b) with a < b, sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(StateIndex a, StateIndex b) const;
  std::vector<StateIndex> neighbors(StateIndex v) const;

 private:
  StateSpace space_;
  std::vector<StateIndex> vertices_;
  std::vector<Edge> edges_;
};

/// A family of disjoint nonempty subsets of X_in, kept in canonical form:
/// each block sorted, blocks ordered by their minimal element.
class RobustnessStructure {
 public:
  RobustnessStructure() = default;
  /// Throws InvalidArgument for empty or overlapping blocks.
  explicit RobustnessStructure(std::vector<std::vector<StateIndex>> blocks);

  const std::vector<std::vector<StateIndex>>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  /// ∪B, sorted.
  std::vector<StateIndex> support() const;
  /// f_B: the block containing x, if any.
  std::optional<std::size_t> block_of(StateIndex x) const;

  bool operator==(const RobustnessStructure& other) const { return blocks_ == other.blocks_; }
  bool operator<(const RobustnessStructure& other) const { return blocks_ < other.blocks_; }

 private:
  std::vector<std::vector<StateIndex>> blocks_;
  std::vector<std::pair<StateIndex, std::size_t>> index_;  // sorted by state
};

/// Normalizes a vertex set: sorted, deduplicated, range-checked.
std::vector<StateIndex> normalize_states(const StateSpace& space, std::vector<StateIndex> states);

/// G_{R,S}; S = X_in gives G_R.
RobustnessGraph build_graph(const RobustnessSpec& spec, std::vector<StateIndex> states);

/// Connected components of a materialized graph.
RobustnessStructure connected_components(const RobustnessGraph& graph);

/// Components of G_{R,S} without materializing edges: states of S are
/// bucketed by cylinder and each bucket of a spec pair is merged.
RobustnessStructure structure_of(const RobustnessSpec& spec, std::vector<StateIndex> states);

}  // namespace knockout

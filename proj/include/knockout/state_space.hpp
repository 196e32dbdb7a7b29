#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace knockout {

/// Dense index of a (partial) input state.
using StateIndex = std::uint32_t;

/// A subset of the input nodes {1, ..., n}; node i is stored in bit i-1.
class NodeSet {
 public:
  static constexpr int kMaxNodes = 30;

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint32_t bits) : bits_(bits) {}

  static NodeSet of(std::initializer_list<int> nodes);
  static NodeSet of(std::span<const int> nodes);
  static constexpr NodeSet full(int n) { return NodeSet(n <= 0 ? 0u : (1u << n) - 1u); }
  static constexpr NodeSet single(int node) { return NodeSet(1u << (node - 1)); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int node) const { return (bits_ >> (node - 1)) & 1u; }
  constexpr bool subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }

  /// Nodes in ascending order (1-based).
  std::vector<int> nodes() const;
  std::string to_string() const;

  constexpr NodeSet operator|(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
  constexpr NodeSet operator&(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
  /// Set difference.
  constexpr NodeSet operator-(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }
  constexpr bool operator==(const NodeSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Canonical order on node sets: by size, then lexicographically on the
/// ascending node lists. Used wherever output order must be reproducible.
struct CanonicalNodeSetLess {
  bool operator()(NodeSet a, NodeSet b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    const std::uint32_t diff = a.bits() ^ b.bits();
    if (diff == 0) return false;
    const std::uint32_t lowest = diff & (~diff + 1u);
    return (a.bits() & lowest) != 0;
  }
};

/// All subsets of [n] in canonical order.
std::vector<NodeSet> all_subsets(int n);

/// The finite product space X_0 x X_1 x ... x X_n. Input states (elements of
/// X_1 x ... x X_n) are indexed row-major with node 1 varying slowest; the
/// same convention indexes assignments on a subset R (ascending nodes).
class StateSpace {
 public:
  /// cardinalities = {d_0, d_1, ..., d_n}; throws InvalidCardinality.
  explicit StateSpace(std::vector<int> cardinalities);

  int num_inputs() const { return static_cast<int>(cardinalities_.size()) - 1; }
  int output_size() const { return cardinalities_[0]; }
  int cardinality(int node) const { return cardinalities_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& cardinalities() const { return cardinalities_; }
  NodeSet all_nodes() const { return NodeSet::full(num_inputs()); }

  /// |X_in|.
  std::uint64_t input_size() const { return input_size_; }
  /// |X_R| = prod_{i in R} d_i.
  std::uint64_t size_of(NodeSet nodes) const;

  std::vector<int> coordinates(StateIndex x) const;
  int coordinate(StateIndex x, int node) const;
  StateIndex index(std::span<const int> coordinates) const;

  /// Index of x|_R inside X_R.
  StateIndex restrict(StateIndex x, NodeSet nodes) const;
  /// Values of the assignment with index `assignment` on `nodes`, ascending node order.
  std::vector<int> assignment(NodeSet nodes, StateIndex assignment) const;
  /// Index of an assignment on `nodes` given its values in ascending node order.
  StateIndex assignment_index(NodeSet nodes, std::span<const int> values) const;
  /// Restriction of an assignment on `outer` to `inner` (inner ⊆ outer).
  StateIndex restrict_assignment(NodeSet outer, StateIndex assignment, NodeSet inner) const;

  /// Nodes on which x and y agree.
  NodeSet agreement(StateIndex x, StateIndex y) const;
  int hamming(StateIndex x, StateIndex y) const;

  /// Members of the cylinder set C(R, x_R) in increasing index order.
  std::vector<StateIndex> cylinder(NodeSet nodes, StateIndex assignment) const;

  /// Coordinate tuple rendered as "(x_1,...,x_n)".
  std::string label(StateIndex x) const;

  bool operator==(const StateSpace& other) const { return cardinalities_ == other.cardinalities_; }

 private:
  std::vector<int> cardinalities_;
  std::vector<std::uint64_t> strides_;  // strides_[i] for node i (1-based); strides_[0] unused
  std::uint64_t input_size_ = 1;
};

StateSpace make_state_space(std::vector<int> cardinalities);

/// All input states 0, ..., |X_in| - 1.
std::vector<StateIndex> all_states(const StateSpace& space);

}  // namespace knockout

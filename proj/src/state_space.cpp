#include "knockout/state_space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "knockout/errors.hpp"

namespace knockout {

namespace {
constexpr std::uint64_t kMaxInputStates = std::uint64_t{1} << 31;
}

NodeSet NodeSet::of(std::initializer_list<int> nodes) {
  return of(std::span<const int>(nodes.begin(), nodes.size()));
}

NodeSet NodeSet::of(std::span<const int> nodes) {
  std::uint32_t bits = 0;
  for (int node : nodes) {
    if (node < 1 || node > kMaxNodes) {
      throw Error(ErrorCode::InvalidNode, "node " + std::to_string(node) + " out of range");
    }
    bits |= 1u << (node - 1);
  }
  return NodeSet(bits);
}

std::vector<int> NodeSet::nodes() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::string NodeSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int node : nodes()) {
    if (!first) os << ',';
    os << node;
    first = false;
  }
  os << '}';
  return os.str();
}

std::vector<NodeSet> all_subsets(int n) {
  std::vector<NodeSet> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) out.emplace_back(b);
  std::sort(out.begin(), out.end(), CanonicalNodeSetLess{});
  return out;
}

StateSpace::StateSpace(std::vector<int> cardinalities) : cardinalities_(std::move(cardinalities)) {
  if (cardinalities_.size() < 2) {
    throw Error(ErrorCode::InvalidCardinality, "need d_0 and at least one input cardinality");
  }
  if (num_inputs() > NodeSet::kMaxNodes) {
    throw Error(ErrorCode::StateSpaceTooLarge, "at most 30 input nodes are supported");
  }
  for (std::size_t i = 0; i < cardinalities_.size(); ++i) {
    if (cardinalities_[i] < 1) {
      throw Error(ErrorCode::InvalidCardinality,
                  "d_" + std::to_string(i) + " = " + std::to_string(cardinalities_[i]));
    }
  }
  const int n = num_inputs();
  strides_.assign(static_cast<std::size_t>(n) + 1, 1);
  for (int i = n; i >= 1; --i) {
    strides_[static_cast<std::size_t>(i)] = input_size_;
    input_size_ *= static_cast<std::uint64_t>(cardinalities_[static_cast<std::size_t>(i)]);
    if (input_size_ > kMaxInputStates) {
      throw Error(ErrorCode::StateSpaceTooLarge, "|X_in| exceeds 2^31");
    }
  }
}

std::uint64_t StateSpace::size_of(NodeSet nodes) const {
  std::uint64_t size = 1;
  for (int node : nodes.nodes()) size *= static_cast<std::uint64_t>(cardinality(node));
  return size;
}

std::vector<int> StateSpace::coordinates(StateIndex x) const {
  const int n = num_inputs();
  std::vector<int> out(static_cast<std::size_t>(n));
  std::uint64_t rest = x;
  for (int i = n; i >= 1; --i) {
    const auto d = static_cast<std::uint64_t>(cardinality(i));
    out[static_cast<std::size_t>(i - 1)] = static_cast<int>(rest % d);
    rest /= d;
  }
  return out;
}

int StateSpace::coordinate(StateIndex x, int node) const {
  return static_cast<int>((x / strides_[static_cast<std::size_t>(node)]) %
                          static_cast<std::uint64_t>(cardinality(node)));
}

StateIndex StateSpace::index(std::span<const int> coordinates) const {
  if (static_cast<int>(coordinates.size()) != num_inputs()) {
    throw Error(ErrorCode::InvalidArgument, "coordinate vector has wrong length");
  }
  std::uint64_t idx = 0;
  for (int i = 1; i <= num_inputs(); ++i) {
    const int v = coordinates[static_cast<std::size_t>(i - 1)];
    if (v < 0 || v >= cardinality(i)) {
      throw Error(ErrorCode::InvalidValue, "x_" + std::to_string(i) + " = " + std::to_string(v));
    }
    idx += static_cast<std::uint64_t>(v) * strides_[static_cast<std::size_t>(i)];
  }
  return static_cast<StateIndex>(idx);
}

StateIndex StateSpace::restrict(StateIndex x, NodeSet nodes) const {
  std::uint64_t idx = 0;
  for (int node : nodes.nodes()) {
    idx = idx * static_cast<std::uint64_t>(cardinality(node)) +
          static_cast<std::uint64_t>(coordinate(x, node));
  }
  return static_cast<StateIndex>(idx);
}

std::vector<int> StateSpace::assignment(NodeSet nodes, StateIndex assignment) const {
  const std::vector<int> list = nodes.nodes();
  std::vector<int> values(list.size());
  std::uint64_t rest = assignment;
  for (std::size_t j = list.size(); j-- > 0;) {
    const auto d = static_cast<std::uint64_t>(cardinality(list[j]));
    values[j] = static_cast<int>(rest % d);
    rest /= d;
  }
  return values;
}

StateIndex StateSpace::assignment_index(NodeSet nodes, std::span<const int> values) const {
  const std::vector<int> list = nodes.nodes();
  if (values.size() != list.size()) {
    throw Error(ErrorCode::InvalidValue, "assignment on " + nodes.to_string() + " has wrong length");
  }
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < list.size(); ++j) {
    if (values[j] < 0 || values[j] >= cardinality(list[j])) {
      throw Error(ErrorCode::InvalidValue,
                  "x_" + std::to_string(list[j]) + " = " + std::to_string(values[j]));
    }
    idx = idx * static_cast<std::uint64_t>(cardinality(list[j])) + static_cast<std::uint64_t>(values[j]);
  }
  return static_cast<StateIndex>(idx);
}

StateIndex StateSpace::restrict_assignment(NodeSet outer, StateIndex assignment, NodeSet inner) const {
  const std::vector<int> list = outer.nodes();
  const std::vector<int> values = this->assignment(outer, assignment);
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < list.size(); ++j) {
    if (!inner.contains(list[j])) continue;
    idx = idx * static_cast<std::uint64_t>(cardinality(list[j])) + static_cast<std::uint64_t>(values[j]);
  }
  return static_cast<StateIndex>(idx);
}

NodeSet StateSpace::agreement(StateIndex x, StateIndex y) const {
  std::uint32_t bits = 0;
  for (int i = 1; i <= num_inputs(); ++i) {
    if (coordinate(x, i) == coordinate(y, i)) bits |= 1u << (i - 1);
  }
  return NodeSet(bits);
}

int StateSpace::hamming(StateIndex x, StateIndex y) const {
  return num_inputs() - agreement(x, y).size();
}

std::vector<StateIndex> StateSpace::cylinder(NodeSet nodes, StateIndex assignment) const {
  const std::vector<int> fixed = this->assignment(nodes, assignment);
  const std::vector<int> list = nodes.nodes();
  std::uint64_t base = 0;
  for (std::size_t j = 0; j < list.size(); ++j) {
    base += static_cast<std::uint64_t>(fixed[j]) * strides_[static_cast<std::size_t>(list[j])];
  }
  const std::vector<int> free_nodes = (all_nodes() - nodes).nodes();
  std::vector<StateIndex> out;
  out.reserve(size_of(all_nodes() - nodes));
  std::vector<int> counter(free_nodes.size(), 0);
  while (true) {
    std::uint64_t idx = base;
    for (std::size_t j = 0; j < free_nodes.size(); ++j) {
      idx += static_cast<std::uint64_t>(counter[j]) * strides_[static_cast<std::size_t>(free_nodes[j])];
    }
    out.push_back(static_cast<StateIndex>(idx));
    bool wrapped = true;
    for (std::size_t j = free_nodes.size(); j-- > 0;) {
      if (++counter[j] < cardinality(free_nodes[j])) {
        wrapped = false;
        break;
      }
      counter[j] = 0;
    }
    if (wrapped) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string StateSpace::label(StateIndex x) const {
  std::ostringstream os;
  os << '(';
  const auto coords = coordinates(x);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ',';
    os << coords[i];
  }
  os << ')';
  return os.str();
}

StateSpace make_state_space(std::vector<int> cardinalities) { return StateSpace(std::move(cardinalities)); }

std::vector<StateIndex> all_states(const StateSpace& space) {
  std::vector<StateIndex> out(space.input_size());
  std::iota(out.begin(), out.end(), StateIndex{0});
  return out;
}

}  // namespace knockout

#include "knockout/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "knockout/errors.hpp"

namespace knockout {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t i) {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --components_;
  return true;
}

AdjacencyTest::AdjacencyTest(const RobustnessSpec& spec) : spec_(spec), subsets_(spec.subsets()) {}

bool AdjacencyTest::operator()(StateIndex x, StateIndex y) const {
  if (x == y) return false;
  const NodeSet agree = spec_.space().agreement(x, y);
  for (NodeSet r : subsets_) {
    if (r.subset_of(agree) && spec_.contains_restriction(x, r)) return true;
  }
  return false;
}

bool rk_adjacent_by_hamming(const StateSpace& space, int k, StateIndex x, StateIndex y) {
  return x != y && space.hamming(x, y) <= space.num_inputs() - k;
}

RobustnessGraph::RobustnessGraph(StateSpace space, std::vector<StateIndex> vertices, std::vector<Edge> edges)
    : space_(std::move(space)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool RobustnessGraph::has_edge(StateIndex a, StateIndex b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::vector<StateIndex> RobustnessGraph::neighbors(StateIndex v) const {
  std::vector<StateIndex> out;
  for (const auto& [a, b] : edges_) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RobustnessStructure::RobustnessStructure(std::vector<std::vector<StateIndex>> blocks) : blocks_(std::move(blocks)) {
  for (auto& block : blocks_) {
    if (block.empty()) throw Error(ErrorCode::InvalidArgument, "robustness structure with an empty block");
    std::sort(block.begin(), block.end());
    if (std::adjacent_find(block.begin(), block.end()) != block.end()) {
      throw Error(ErrorCode::InvalidArgument, "duplicate state inside a block");
    }
  }
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (StateIndex x : blocks_[b]) index_.emplace_back(x, b);
  }
  std::sort(index_.begin(), index_.end());
  for (std::size_t i = 1; i < index_.size(); ++i) {
    if (index_[i].first == index_[i - 1].first) {
      throw Error(ErrorCode::InvalidArgument, "blocks are not disjoint");
    }
  }
}

std::vector<StateIndex> RobustnessStructure::support() const {
  std::vector<StateIndex> out;
  out.reserve(index_.size());
  for (const auto& [x, b] : index_) out.push_back(x);
  return out;
}

std::optional<std::size_t> RobustnessStructure::block_of(StateIndex x) const {
  const auto it = std::lower_bound(index_.begin(), index_.end(), std::pair<StateIndex, std::size_t>{x, 0});
  if (it == index_.end() || it->first != x) return std::nullopt;
  return it->second;
}

std::vector<StateIndex> normalize_states(const StateSpace& space, std::vector<StateIndex> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  if (!states.empty() && states.back() >= space.input_size()) {
    throw Error(ErrorCode::InvalidArgument, "state index " + std::to_string(states.back()) + " out of range");
  }
  return states;
}

namespace {

/// Buckets of S for every spec pair (R, x_R): the states of S ∩ C(R, x_R),
/// given as local indices into S. Buckets with fewer than two states are skipped.
template <class F>
void for_each_cylinder_bucket(const RobustnessSpec& spec, const std::vector<StateIndex>& states, F&& f) {
  const StateSpace& space = spec.space();
  for (const auto& [r, entry] : spec.entries()) {
    std::unordered_map<StateIndex, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const StateIndex a = space.restrict(states[i], r);
      if (entry.contains(a)) buckets[a].push_back(i);
    }
    for (auto& [a, members] : buckets) {
      if (members.size() > 1) f(members);
    }
  }
}

RobustnessStructure blocks_from_union_find(const std::vector<StateIndex>& states, UnionFind& uf) {
  std::unordered_map<std::size_t, std::size_t> root_to_block;
  std::vector<std::vector<StateIndex>> blocks;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t root = uf.find(i);
    auto [it, inserted] = root_to_block.emplace(root, blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(states[i]);
  }
  return RobustnessStructure(std::move(blocks));
}

}  // namespace

RobustnessGraph build_graph(const RobustnessSpec& spec, std::vector<StateIndex> states) {
  states = normalize_states(spec.space(), std::move(states));
  std::set<RobustnessGraph::Edge> edges;
  for_each_cylinder_bucket(spec, states, [&](const std::vector<std::size_t>& members) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        edges.emplace(states[members[i]], states[members[j]]);
      }
    }
  });
  return RobustnessGraph(spec.space(), std::move(states), {edges.begin(), edges.end()});
}

RobustnessStructure connected_components(const RobustnessGraph& graph) {
  const auto& vertices = graph.vertices();
  UnionFind uf(vertices.size());
  for (const auto& [a, b] : graph.edges()) {
    const auto ia = static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), a) - vertices.begin());
    const auto ib = static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), b) - vertices.begin());
    uf.unite(ia, ib);
  }
  return blocks_from_union_find(vertices, uf);
}

RobustnessStructure structure_of(const RobustnessSpec& spec, std::vector<StateIndex> states) {
  states = normalize_states(spec.space(), std::move(states));
  UnionFind uf(states.size());
  for_each_cylinder_bucket(spec, states, [&](const std::vector<std::size_t>& members) {
    for (std::size_t i = 1; i < members.size(); ++i) uf.unite(members[0], members[i]);
  });
  return blocks_from_union_find(states, uf);
}

}  // namespace knockout

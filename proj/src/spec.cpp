#include "knockout/spec.hpp"

#include <algorithm>

#include "knockout/errors.hpp"

namespace knockout {

void RobustnessSpec::check_nodes(NodeSet nodes) const {
  if (!nodes.subset_of(space_.all_nodes())) {
    throw Error(ErrorCode::InvalidNode, nodes.to_string() + " is not a subset of [n]");
  }
}

void RobustnessSpec::normalize(NodeSet nodes) {
  SpecEntry& entry = entries_[nodes];
  if (!entry.all && entry.assignments.size() == space_.size_of(nodes)) {
    entry.all = true;
    entry.assignments.clear();
  }
}

void RobustnessSpec::add(NodeSet nodes, std::span<const int> values) {
  check_nodes(nodes);
  add_index(nodes, space_.assignment_index(nodes, values));
}

void RobustnessSpec::add_index(NodeSet nodes, StateIndex assignment) {
  check_nodes(nodes);
  if (assignment >= space_.size_of(nodes)) {
    throw Error(ErrorCode::InvalidValue, "assignment index out of range for " + nodes.to_string());
  }
  SpecEntry& entry = entries_[nodes];
  if (entry.all) return;
  entry.assignments.insert(assignment);
  normalize(nodes);
}

void RobustnessSpec::add_all(NodeSet nodes) {
  check_nodes(nodes);
  SpecEntry& entry = entries_[nodes];
  entry.all = true;
  entry.assignments.clear();
}

bool RobustnessSpec::contains(NodeSet nodes, StateIndex assignment) const {
  const auto it = entries_.find(nodes);
  return it != entries_.end() && it->second.contains(assignment);
}

std::vector<NodeSet> RobustnessSpec::subsets() const {
  std::vector<NodeSet> out;
  out.reserve(entries_.size());
  for (const auto& [nodes, entry] : entries_) out.push_back(nodes);
  return out;
}

std::uint64_t RobustnessSpec::pair_count() const {
  std::uint64_t count = 0;
  for (const auto& [nodes, entry] : entries_) {
    count += entry.all ? space_.size_of(nodes) : entry.assignments.size();
  }
  return count;
}

void RobustnessSpec::for_each_pair(const std::function<void(NodeSet, StateIndex)>& f) const {
  for (const auto& [nodes, entry] : entries_) {
    if (entry.all) {
      const auto size = space_.size_of(nodes);
      for (std::uint64_t a = 0; a < size; ++a) f(nodes, static_cast<StateIndex>(a));
    } else {
      for (StateIndex a : entry.assignments) f(nodes, a);
    }
  }
}

SubsetFamily::SubsetFamily(int n, std::vector<NodeSet> members)
    : n_(n), members_(std::move(members)), indicator_(std::size_t{1} << n, 0) {
  std::sort(members_.begin(), members_.end(), CanonicalNodeSetLess{});
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (NodeSet m : members_) indicator_[m.bits()] = 1;
}

std::vector<NodeSet> SubsetFamily::restricted_to(NodeSet c) const {
  std::vector<NodeSet> out;
  for (NodeSet m : members_) {
    if (m.subset_of(c)) out.push_back(m);
  }
  return out;
}

bool SubsetFamily::is_downward_closed() const {
  for (NodeSet m : members_) {
    // every subset obtained by dropping one node must be present
    for (int node : m.nodes()) {
      if (!contains(m - NodeSet::single(node))) return false;
    }
  }
  return true;
}

RobustnessSpec make_rk_spec(const StateSpace& space, int k) {
  const int n = space.num_inputs();
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidK, "k = " + std::to_string(k) + " not in [0, n]");
  RobustnessSpec spec(space);
  for (NodeSet r : all_subsets(n)) {
    if (r.size() >= k) spec.add_all(r);
  }
  return spec;
}

RobustnessSpec make_canalyzing_spec(const StateSpace& space, int node, int value) {
  const int n = space.num_inputs();
  if (node < 1 || node > n) throw Error(ErrorCode::InvalidNode, "node " + std::to_string(node));
  if (value < 0 || value >= space.cardinality(node)) {
    throw Error(ErrorCode::InvalidValue, "value " + std::to_string(value) + " for node " + std::to_string(node));
  }
  RobustnessSpec spec(space);
  const NodeSet single = NodeSet::single(node);
  for (NodeSet r : all_subsets(n)) {
    if (!r.contains(node)) continue;
    const auto size = space.size_of(r);
    for (std::uint64_t a = 0; a < size; ++a) {
      const auto idx = static_cast<StateIndex>(a);
      if (space.restrict_assignment(r, idx, single) == static_cast<StateIndex>(value)) spec.add_index(r, idx);
    }
  }
  return spec;
}

RobustnessSpec make_nested_canalyzing_spec(const StateSpace& space, const std::vector<int>& canalyzing_values) {
  const int n = space.num_inputs();
  if (static_cast<int>(canalyzing_values.size()) != n) {
    throw Error(ErrorCode::InvalidValue, "need one canalyzing value per input node");
  }
  for (int i = 1; i <= n; ++i) {
    const int a = canalyzing_values[static_cast<std::size_t>(i - 1)];
    if (a < 0 || a >= space.cardinality(i)) {
      throw Error(ErrorCode::InvalidValue, "a_" + std::to_string(i) + " = " + std::to_string(a));
    }
  }
  RobustnessSpec spec(space);
  for (int k = 1; k <= n; ++k) {
    const NodeSet prefix = NodeSet::full(k);
    for (NodeSet r : all_subsets(n)) {
      if (!prefix.subset_of(r)) continue;
      const std::vector<int> nodes = r.nodes();
      const auto size = space.size_of(r);
      for (std::uint64_t a = 0; a < size; ++a) {
        const auto values = space.assignment(r, static_cast<StateIndex>(a));
        bool match = true;
        // r contains [k] and nodes are ascending, so nodes[i-1] == i for i <= k
        for (int i = 1; i < k && match; ++i) match = values[static_cast<std::size_t>(i - 1)] != canalyzing_values[static_cast<std::size_t>(i - 1)];
        if (match) match = values[static_cast<std::size_t>(k - 1)] == canalyzing_values[static_cast<std::size_t>(k - 1)];
        if (match) spec.add_index(r, static_cast<StateIndex>(a));
      }
    }
  }
  return spec;
}

namespace {

/// Calls f(R') for every R' with R ⊊ R' ⊊ [n].
template <class F>
void for_each_strict_superset(NodeSet r, NodeSet full, F&& f) {
  const std::uint32_t free = (full - r).bits();
  for (std::uint32_t sub = free; sub != 0; sub = (sub - 1) & free) {
    const NodeSet bigger = r | NodeSet(sub);
    if (bigger == full) continue;
    f(bigger);
  }
}

}  // namespace

bool is_coherent(const RobustnessSpec& spec) {
  const StateSpace& space = spec.space();
  const NodeSet full = space.all_nodes();
  bool ok = true;
  for (const auto& [r, entry] : spec.entries()) {
    for_each_strict_superset(r, full, [&](NodeSet bigger) {
      if (!ok) return;
      const auto it = spec.entries().find(bigger);
      if (it != spec.entries().end() && it->second.all) return;
      if (entry.all) {
        ok = false;
        return;
      }
      const auto size = space.size_of(bigger);
      for (std::uint64_t a = 0; a < size && ok; ++a) {
        const auto idx = static_cast<StateIndex>(a);
        if (entry.contains(space.restrict_assignment(bigger, idx, r)) && !spec.contains(bigger, idx)) ok = false;
      }
    });
    if (!ok) return false;
  }
  return true;
}

RobustnessSpec coherent_closure(const RobustnessSpec& spec) {
  RobustnessSpec closed = spec;
  const StateSpace& space = spec.space();
  const NodeSet full = space.all_nodes();
  // Keys are visited in canonical (size-increasing) order and insertions only
  // create strictly larger keys, so one pass reaches the fixed point.
  for (auto it = closed.entries().begin(); it != closed.entries().end(); ++it) {
    const NodeSet r = it->first;
    const SpecEntry entry = it->second;
    for_each_strict_superset(r, full, [&](NodeSet bigger) {
      if (entry.all) {
        closed.add_all(bigger);
        return;
      }
      const auto size = space.size_of(bigger);
      for (std::uint64_t a = 0; a < size; ++a) {
        const auto idx = static_cast<StateIndex>(a);
        if (entry.contains(space.restrict_assignment(bigger, idx, r))) closed.add_index(bigger, idx);
      }
    });
  }
  return closed;
}

bool is_saturated(const RobustnessSpec& spec) {
  return std::all_of(spec.entries().begin(), spec.entries().end(),
                     [](const auto& kv) { return kv.second.all; });
}

std::vector<NodeSet> minimal_sets(std::vector<NodeSet> family) {
  std::sort(family.begin(), family.end(), CanonicalNodeSetLess{});
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<NodeSet> out;
  for (NodeSet candidate : family) {
    // canonical order lists subsets before supersets
    const bool dominated = std::any_of(out.begin(), out.end(), [&](NodeSet m) { return m.subset_of(candidate); });
    if (!dominated) out.push_back(candidate);
  }
  return out;
}

std::vector<NodeSet> r_sets(const RobustnessSpec& spec, StateIndex x) {
  std::vector<NodeSet> out;
  for (const auto& [r, entry] : spec.entries()) {
    if (entry.contains(spec.space().restrict(x, r))) out.push_back(r);
  }
  if (out.empty()) out.push_back(spec.space().all_nodes());
  return out;
}

std::vector<NodeSet> r_min(const RobustnessSpec& spec, StateIndex x) { return minimal_sets(r_sets(spec, x)); }

SubsetFamily delta_family(const RobustnessSpec& spec) {
  if (!is_saturated(spec)) throw Error(ErrorCode::NotSaturated, "Δ is defined for saturated specifications");
  const int n = spec.space().num_inputs();
  std::vector<NodeSet> members;
  for (NodeSet r : r_min(spec, 0)) {
    const std::uint32_t bits = r.bits();
    for (std::uint32_t sub = bits;; sub = (sub - 1) & bits) {
      members.emplace_back(sub);
      if (sub == 0) break;
    }
  }
  return SubsetFamily(n, std::move(members));
}

}  // namespace knockout

#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "knockout/state_space.hpp"

namespace knockout {

/// The assignments stored with one subset R of a robustness specification:
/// either every x_R (saturated in R) or an explicit set of assignment indices.
struct SpecEntry {
  bool all = false;
  std::set<StateIndex> assignments;  // empty when `all`

  bool contains(StateIndex assignment) const { return all || assignments.count(assignment) != 0; }
  bool operator==(const SpecEntry&) const = default;
};

/// A robustness specification: a set of pairs (R, x_R) with R ⊆ [n].
///
/// Pairs are grouped by R. When every x_R ∈ X_R is present for some R the
/// group is stored as a single ALL marker, so R_k never enumerates X_R.
class RobustnessSpec {
 public:
  using Entries = std::map<NodeSet, SpecEntry, CanonicalNodeSetLess>;

  explicit RobustnessSpec(StateSpace space) : space_(std::move(space)) {}

  const StateSpace& space() const { return space_; }
  const Entries& entries() const { return entries_; }

  /// Adds (R, x_R); duplicates are ignored. Throws InvalidNode / InvalidValue.
  void add(NodeSet nodes, std::span<const int> values);
  void add_index(NodeSet nodes, StateIndex assignment);
  /// Adds (R, x_R) for every x_R ∈ X_R.
  void add_all(NodeSet nodes);

  bool contains(NodeSet nodes, StateIndex assignment) const;
  /// Whether (R, x|_R) is in the specification.
  bool contains_restriction(StateIndex x, NodeSet nodes) const {
    return contains(nodes, space_.restrict(x, nodes));
  }

  /// Subsets R that occur with at least one assignment, in canonical order.
  std::vector<NodeSet> subsets() const;
  bool empty() const { return entries_.empty(); }
  std::uint64_t pair_count() const;
  /// Calls f(R, x_R index) for every pair, R in canonical order, x_R ascending.
  void for_each_pair(const std::function<void(NodeSet, StateIndex)>& f) const;

  bool operator==(const RobustnessSpec& other) const {
    return space_ == other.space_ && entries_ == other.entries_;
  }

 private:
  void check_nodes(NodeSet nodes) const;
  void normalize(NodeSet nodes);

  StateSpace space_;
  Entries entries_;
};

/// A family of subsets of [n], stored with an indicator over all 2^n subsets.
class SubsetFamily {
 public:
  SubsetFamily(int n, std::vector<NodeSet> members);

  int num_nodes() const { return n_; }
  bool contains(NodeSet s) const { return indicator_[s.bits()] != 0; }
  /// Members in canonical order.
  const std::vector<NodeSet>& members() const { return members_; }
  /// {B ∈ family : B ⊆ C}.
  std::vector<NodeSet> restricted_to(NodeSet c) const;
  bool is_downward_closed() const;
  bool operator==(const SubsetFamily& other) const { return n_ == other.n_ && members_ == other.members_; }

 private:
  int n_;
  std::vector<NodeSet> members_;
  std::vector<char> indicator_;
};

/// R_k = {(R, x_R) : |R| >= k}. Throws InvalidK unless 0 <= k <= n.
RobustnessSpec make_rk_spec(const StateSpace& space, int k);

/// {(R, x_R) : node ∈ R, x_R|_node = value}.
RobustnessSpec make_canalyzing_spec(const StateSpace& space, int node, int value);

/// Disjoint union over k of R^(k) = {(R, x_R) : [k] ⊆ R, x_i ≠ a_i for i < k, x_k = a_k}.
RobustnessSpec make_nested_canalyzing_spec(const StateSpace& space, const std::vector<int>& canalyzing_values);

/// Coherence with the strict reading R ⊊ R' ⊊ [n].
bool is_coherent(const RobustnessSpec& spec);
RobustnessSpec coherent_closure(const RobustnessSpec& spec);
bool is_saturated(const RobustnessSpec& spec);

/// R_x = {R : (R, x|_R) ∈ spec}, or {[n]} when that set is empty.
std::vector<NodeSet> r_sets(const RobustnessSpec& spec, StateIndex x);
/// Inclusion-minimal elements of R_x, canonical order.
std::vector<NodeSet> r_min(const RobustnessSpec& spec, StateIndex x);
/// Δ = {C : C ⊆ R for some R ∈ R^min}; requires a saturated spec (NotSaturated).
SubsetFamily delta_family(const RobustnessSpec& spec);

/// Inclusion-minimal members of a family of subsets, canonical order.
std::vector<NodeSet> minimal_sets(std::vector<NodeSet> family);

}  // namespace knockout

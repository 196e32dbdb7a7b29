#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knockout/errors.hpp"
#include "knockout/graph.hpp"
#include "knockout/scalar.hpp"

namespace knockout {

/// Row-stochastic matrix κ(x_A; x_0) with rows indexed by X_A for a domain A ⊆ [n].
template <class Scalar>
class StochasticMap {
 public:
  using Traits = ScalarTraits<Scalar>;
  static constexpr double kRowSumTolerance = 1e-12;

  StochasticMap(StateSpace space, NodeSet domain, std::vector<Scalar> entries)
      : space_(std::move(space)), domain_(domain), entries_(std::move(entries)) {
    if (!domain_.subset_of(space_.all_nodes())) throw Error(ErrorCode::InvalidNode, domain_.to_string());
    const auto rows = num_rows();
    const auto d0 = static_cast<std::uint64_t>(output_size());
    if (entries_.size() != rows * d0) {
      throw Error(ErrorCode::IndexMismatch, "expected " + std::to_string(rows * d0) + " entries on " +
                                                domain_.to_string() + ", got " + std::to_string(entries_.size()));
    }
    for (std::uint64_t r = 0; r < rows; ++r) {
      Scalar sum = Traits::zero();
      for (std::uint64_t j = 0; j < d0; ++j) {
        const Scalar& v = entries_[r * d0 + j];
        if (v < Traits::zero()) throw Error(ErrorCode::NotStochastic, "negative entry in row " + std::to_string(r));
        sum += v;
      }
      if (!Traits::equal(sum, Traits::one(), kRowSumTolerance)) {
        throw Error(ErrorCode::NotStochastic,
                    "row " + std::to_string(r) + " of κ_" + domain_.to_string() + " does not sum to 1");
      }
    }
  }

  /// Every row equal to `row`.
  static StochasticMap constant(const StateSpace& space, NodeSet domain, const std::vector<Scalar>& row) {
    std::vector<Scalar> entries;
    const auto rows = space.size_of(domain);
    entries.reserve(rows * row.size());
    for (std::uint64_t r = 0; r < rows; ++r) entries.insert(entries.end(), row.begin(), row.end());
    return StochasticMap(space, domain, std::move(entries));
  }

  const StateSpace& space() const { return space_; }
  NodeSet domain() const { return domain_; }
  int output_size() const { return space_.output_size(); }
  std::uint64_t num_rows() const { return space_.size_of(domain_); }
  const std::vector<Scalar>& entries() const { return entries_; }

  std::span<const Scalar> row(StateIndex r) const {
    const auto d0 = static_cast<std::size_t>(output_size());
    return std::span<const Scalar>(entries_).subspan(static_cast<std::size_t>(r) * d0, d0);
  }
  std::vector<Scalar> row_vector(StateIndex r) const {
    const auto s = row(r);
    return {s.begin(), s.end()};
  }
  const Scalar& operator()(StateIndex r, int x0) const {
    return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(output_size()) + static_cast<std::size_t>(x0)];
  }

  bool operator==(const StochasticMap& other) const {
    return space_ == other.space_ && domain_ == other.domain_ && entries_ == other.entries_;
  }

 private:
  StateSpace space_;
  NodeSet domain_;
  std::vector<Scalar> entries_;
};

using RationalMap = StochasticMap<Rational>;
using FloatMap = StochasticMap<double>;

/// ∞-norm comparison of two distributions (exact for rationals).
template <class Scalar>
bool rows_equal(std::span<const Scalar> a, std::span<const Scalar> b, double tol = kDefaultTolerance) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ScalarTraits<Scalar>::equal(a[i], b[i], tol)) return false;
  }
  return true;
}

/// The post-knockout kernels κ_A for all A ⊆ [n], indexed by the bits of A.
template <class Scalar>
class FunctionalModalities {
 public:
  explicit FunctionalModalities(std::vector<StochasticMap<Scalar>> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error(ErrorCode::IndexMismatch, "empty modality family");
    const StateSpace& space = members_.front().space();
    if (members_.size() != (std::size_t{1} << space.num_inputs())) {
      throw Error(ErrorCode::IndexMismatch, "need one modality per subset of [n]");
    }
    for (std::size_t a = 0; a < members_.size(); ++a) {
      if (!(members_[a].space() == space) || members_[a].domain().bits() != a) {
        throw Error(ErrorCode::IndexMismatch, "modality " + std::to_string(a) + " has the wrong domain");
      }
    }
  }

  const StateSpace& space() const { return members_.front().space(); }
  const StochasticMap<Scalar>& operator[](NodeSet a) const { return members_[a.bits()]; }
  const StochasticMap<Scalar>& full() const { return members_.back(); }
  const std::vector<StochasticMap<Scalar>>& members() const { return members_; }
  bool operator==(const FunctionalModalities& other) const { return members_ == other.members_; }

 private:
  std::vector<StochasticMap<Scalar>> members_;
};

using RationalModalities = FunctionalModalities<Rational>;
using FloatModalities = FunctionalModalities<double>;

/// f : X_in -> X_0 stored as a dense table.
class DeterministicMap {
 public:
  DeterministicMap(StateSpace space, std::vector<int> values) : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.input_size()) throw Error(ErrorCode::IndexMismatch, "table length != |X_in|");
    for (int v : values_) {
      if (v < 0 || v >= space_.output_size()) throw Error(ErrorCode::InvalidValue, "output " + std::to_string(v));
    }
  }
  template <class F>
  static DeterministicMap tabulate(const StateSpace& space, F&& f) {
    std::vector<int> values;
    values.reserve(space.input_size());
    for (StateIndex x = 0; x < space.input_size(); ++x) values.push_back(f(space.coordinates(x)));
    return DeterministicMap(space, std::move(values));
  }

  const StateSpace& space() const { return space_; }
  int operator()(StateIndex x) const { return values_[x]; }
  const std::vector<int>& values() const { return values_; }

 private:
  StateSpace space_;
  std::vector<int> values_;
};

/// κ^f(x; x_0) = [f(x) = x_0].
template <class Scalar = Rational>
StochasticMap<Scalar> from_function(const DeterministicMap& f) {
  const auto d0 = static_cast<std::size_t>(f.space().output_size());
  std::vector<Scalar> entries(f.space().input_size() * d0, ScalarTraits<Scalar>::zero());
  for (StateIndex x = 0; x < f.space().input_size(); ++x) {
    entries[x * d0 + static_cast<std::size_t>(f(x))] = ScalarTraits<Scalar>::one();
  }
  return StochasticMap<Scalar>(f.space(), f.space().all_nodes(), std::move(entries));
}

/// Two states of S that must share a row but do not.
struct RobustnessWitness {
  StateIndex x = 0;
  StateIndex y = 0;
};

namespace detail {

template <class Scalar>
void require_full_domain(const StochasticMap<Scalar>& kappa) {
  if (kappa.domain() != kappa.space().all_nodes()) {
    throw Error(ErrorCode::IndexMismatch, "expected a kernel on all of X_in");
  }
}

}  // namespace detail

/// κ(x) = κ(y) whenever x ~ y in G_{R,S}, tested pair by pair.
template <class Scalar>
std::optional<RobustnessWitness> pairwise_witness(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                                                  const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  detail::require_full_domain(kappa);
  const auto s = normalize_states(spec.space(), states);
  const AdjacencyTest adjacent(spec);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (adjacent(s[i], s[j]) && !rows_equal(kappa.row(s[i]), kappa.row(s[j]), tol)) return RobustnessWitness{s[i], s[j]};
    }
  }
  return std::nullopt;
}

/// κ constant on every S ∩ C(R, x_R) with (R, x_R) in the spec.
template <class Scalar>
std::optional<RobustnessWitness> cylinder_witness(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                                                  const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  detail::require_full_domain(kappa);
  const auto s = normalize_states(spec.space(), states);
  for (const auto& [r, entry] : spec.entries()) {
    std::map<StateIndex, StateIndex> first;  // x_R -> first state of S in the cylinder
    for (StateIndex x : s) {
      const StateIndex a = spec.space().restrict(x, r);
      if (!entry.contains(a)) continue;
      const auto [it, inserted] = first.emplace(a, x);
      if (!inserted && !rows_equal(kappa.row(it->second), kappa.row(x), tol)) return RobustnessWitness{it->second, x};
    }
  }
  return std::nullopt;
}

/// κ constant on the connected components of G_{R,S}.
template <class Scalar>
std::optional<RobustnessWitness> component_witness(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                                                   const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  detail::require_full_domain(kappa);
  const auto structure = structure_of(spec, states);
  for (const auto& block : structure.blocks()) {
    for (StateIndex x : block) {
      if (!rows_equal(kappa.row(block.front()), kappa.row(x), tol)) return RobustnessWitness{block.front(), x};
    }
  }
  return std::nullopt;
}

template <class Scalar>
bool robust_pairwise(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                     const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  return !pairwise_witness(kappa, spec, states, tol);
}

template <class Scalar>
bool constant_on_cylinders(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                           const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  return !cylinder_witness(kappa, spec, states, tol);
}

template <class Scalar>
bool constant_on_components(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                            const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  return !component_witness(kappa, spec, states, tol);
}

/// Robustness of κ on S; the cylinder and component formulations are both
/// evaluated and must agree.
template <class Scalar>
bool is_r_robust_map(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                     const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  const bool by_cylinders = constant_on_cylinders(kappa, spec, states, tol);
  const bool by_components = constant_on_components(kappa, spec, states, tol);
  if (by_cylinders != by_components) throw std::logic_error("cylinder and component robustness disagree");
  return by_components;
}

/// An edge of G_{R,S} across which κ changes, if any.
template <class Scalar>
std::optional<RobustnessWitness> robustness_witness(const StochasticMap<Scalar>& kappa, const RobustnessSpec& spec,
                                                    const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  return pairwise_witness(kappa, spec, states, tol);
}

/// κ_[n](x) = κ_R(x|_R) for all x ∈ S and (R, x|_R) in the spec.
template <class Scalar>
bool is_r_robust_modalities(const FunctionalModalities<Scalar>& modalities, const RobustnessSpec& spec,
                            const std::vector<StateIndex>& states, double tol = kDefaultTolerance) {
  const StateSpace& space = modalities.space();
  for (StateIndex x : normalize_states(space, states)) {
    const auto full_row = modalities.full().row(x);
    for (const auto& [r, entry] : spec.entries()) {
      const StateIndex a = space.restrict(x, r);
      if (entry.contains(a) && !rows_equal(full_row, modalities[r].row(a), tol)) return false;
    }
  }
  return true;
}

/// f constant on C(R, x_R).
inline bool is_canalyzing(const DeterministicMap& f, NodeSet nodes, StateIndex assignment) {
  const auto cylinder = f.space().cylinder(nodes, assignment);
  return std::all_of(cylinder.begin(), cylinder.end(), [&](StateIndex x) { return f(x) == f(cylinder.front()); });
}

inline bool is_r_canalyzing(const DeterministicMap& f, const RobustnessSpec& spec) {
  bool ok = true;
  spec.for_each_pair([&](NodeSet r, StateIndex a) {
    if (ok && !is_canalyzing(f, r, a)) ok = false;
  });
  return ok;
}

/// κ' with κ = κ' ∘ f_B on ∪B: one row per block. Throws NotConstantOnBlock.
template <class Scalar>
std::vector<std::vector<Scalar>> factorize_through_structure(const StochasticMap<Scalar>& kappa,
                                                             const RobustnessStructure& structure,
                                                             double tol = kDefaultTolerance) {
  detail::require_full_domain(kappa);
  std::vector<std::vector<Scalar>> out;
  for (const auto& block : structure.blocks()) {
    for (StateIndex x : block) {
      if (!rows_equal(kappa.row(block.front()), kappa.row(x), tol)) {
        throw Error(ErrorCode::NotConstantOnBlock, "κ differs on " + kappa.space().label(block.front()) + " and " +
                                                       kappa.space().label(x));
      }
    }
    out.push_back(kappa.row_vector(block.front()));
  }
  return out;
}

/// κ'(f_B(x)); x must lie in ∪B.
template <class Scalar>
const std::vector<Scalar>& compose_through_structure(const std::vector<std::vector<Scalar>>& factor,
                                                     const RobustnessStructure& structure, StateIndex x) {
  const auto block = structure.block_of(x);
  if (!block || *block >= factor.size()) throw Error(ErrorCode::IndexMismatch, "state outside ∪B");
  return factor[*block];
}

/// State space with one extra value per input; value d_i stands for "knocked out".
inline StateSpace extended_space(const StateSpace& space) {
  auto d = space.cardinalities();
  for (std::size_t i = 1; i < d.size(); ++i) ++d[i];
  return StateSpace(std::move(d));
}

/// Support of an extended state and the index of its restriction in X_supp.
inline std::pair<NodeSet, StateIndex> split_extended(const StateSpace& space, const StateSpace& extended, StateIndex y) {
  const auto coords = extended.coordinates(y);
  std::uint32_t bits = 0;
  std::vector<int> values;
  for (int i = 1; i <= space.num_inputs(); ++i) {
    const int v = coords[static_cast<std::size_t>(i - 1)];
    if (v < space.cardinality(i)) {
      bits |= 1u << (i - 1);
      values.push_back(v);
    }
  }
  const NodeSet support(bits);
  return {support, space.assignment_index(support, values)};
}

/// The single kernel on the extended inputs: hat κ(y) = κ_supp(y)(y|_supp(y)).
template <class Scalar>
StochasticMap<Scalar> hat_kappa(const FunctionalModalities<Scalar>& modalities) {
  const StateSpace& space = modalities.space();
  const StateSpace extended = extended_space(space);
  std::vector<Scalar> entries;
  entries.reserve(extended.input_size() * static_cast<std::uint64_t>(space.output_size()));
  for (StateIndex y = 0; y < extended.input_size(); ++y) {
    const auto [support, a] = split_extended(space, extended, y);
    const auto row = modalities[support].row(a);
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return StochasticMap<Scalar>(extended, extended.all_nodes(), std::move(entries));
}

/// Inverse of hat_kappa.
template <class Scalar>
FunctionalModalities<Scalar> modalities_from_hat(const StochasticMap<Scalar>& hat, const StateSpace& space) {
  if (!(extended_space(space) == hat.space())) throw Error(ErrorCode::IndexMismatch, "not an extended kernel of this space");
  const StateSpace& extended = hat.space();
  std::vector<std::vector<Scalar>> tables(std::size_t{1} << space.num_inputs());
  for (std::size_t a = 0; a < tables.size(); ++a) {
    tables[a].resize(space.size_of(NodeSet(static_cast<std::uint32_t>(a))) * static_cast<std::size_t>(space.output_size()));
  }
  const auto d0 = static_cast<std::size_t>(space.output_size());
  for (StateIndex y = 0; y < extended.input_size(); ++y) {
    const auto [support, a] = split_extended(space, extended, y);
    const auto row = hat.row(y);
    std::copy(row.begin(), row.end(), tables[support.bits()].begin() + static_cast<std::ptrdiff_t>(a * d0));
  }
  std::vector<StochasticMap<Scalar>> members;
  for (std::size_t a = 0; a < tables.size(); ++a) {
    members.emplace_back(space, NodeSet(static_cast<std::uint32_t>(a)), std::move(tables[a]));
  }
  return FunctionalModalities<Scalar>(std::move(members));
}

/// Builds a family from per-member row generators: rows(A, x_A) -> distribution.
template <class Scalar>
FunctionalModalities<Scalar> modalities_from_rows(const StateSpace& space,
                                                  const std::function<std::vector<Scalar>(NodeSet, StateIndex)>& rows) {
  std::vector<StochasticMap<Scalar>> members;
  for (std::uint32_t bits = 0; bits < (1u << space.num_inputs()); ++bits) {
    const NodeSet a(bits);
    std::vector<Scalar> entries;
    for (std::uint64_t xa = 0; xa < space.size_of(a); ++xa) {
      const auto row = rows(a, static_cast<StateIndex>(xa));
      entries.insert(entries.end(), row.begin(), row.end());
    }
    members.emplace_back(space, a, std::move(entries));
  }
  return FunctionalModalities<Scalar>(std::move(members));
}

/// A family that is R-robust on S = ∪B: κ_[n] takes block_rows[b] on block b,
/// and κ_A(x_A) takes the block row whenever (A, x_A) is in the spec and its
/// cylinder meets S. All other rows come from `filler`.
template <class Scalar>
FunctionalModalities<Scalar> robust_modalities_on_structure(
    const RobustnessSpec& spec, const RobustnessStructure& structure, const std::vector<std::vector<Scalar>>& block_rows,
    const std::function<std::vector<Scalar>(NodeSet, StateIndex)>& filler) {
  if (block_rows.size() != structure.size()) throw Error(ErrorCode::IndexMismatch, "one row per block required");
  const StateSpace& space = spec.space();
  const NodeSet full = space.all_nodes();
  return modalities_from_rows<Scalar>(space, [&](NodeSet a, StateIndex xa) -> std::vector<Scalar> {
    if (a == full) {
      if (const auto b = structure.block_of(xa)) return block_rows[*b];
      return filler(a, xa);
    }
    if (spec.contains(a, xa)) {
      for (StateIndex x : space.cylinder(a, xa)) {
        if (const auto b = structure.block_of(x)) return block_rows[*b];
      }
    }
    return filler(a, xa);
  });
}

template <class Scalar>
FloatMap to_float(const StochasticMap<Scalar>& kappa) {
  std::vector<double> entries;
  entries.reserve(kappa.entries().size());
  for (const auto& v : kappa.entries()) entries.push_back(ScalarTraits<Scalar>::to_double(v));
  return FloatMap(kappa.space(), kappa.domain(), std::move(entries));
}

template <class Scalar>
FloatModalities to_float(const FunctionalModalities<Scalar>& modalities) {
  std::vector<FloatMap> members;
  for (const auto& m : modalities.members()) members.push_back(to_float(m));
  return FloatModalities(std::move(members));
}

}  // namespace knockout

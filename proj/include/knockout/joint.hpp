#pragma once

#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "knockout/gibbs.hpp"
#include "knockout/kernel.hpp"

namespace knockout {

/// Probability vector on X_0 x X_in; entry (x_0, x) lives at x * d_0 + x_0, so
/// the fiber p̃_x = (p(x_0, x))_{x_0} is contiguous.
template <class Scalar = Rational>
class JointDistribution {
 public:
  using Traits = ScalarTraits<Scalar>;
  static constexpr double kMassTolerance = 1e-12;

  JointDistribution(StateSpace space, std::vector<Scalar> entries) : space_(std::move(space)), entries_(std::move(entries)) {
    if (entries_.size() != space_.input_size() * static_cast<std::uint64_t>(space_.output_size())) {
      throw Error(ErrorCode::IndexMismatch, "distribution needs |X_0|·|X_in| entries");
    }
    Scalar total = Traits::zero();
    for (const auto& v : entries_) {
      if (v < Traits::zero()) throw Error(ErrorCode::NotStochastic, "negative probability");
      total += v;
    }
    if (Traits::is_zero(total, kMassTolerance)) throw Error(ErrorCode::EmptyDistribution, "zero distribution");
    if (!Traits::equal(total, Traits::one(), kMassTolerance)) throw Error(ErrorCode::NotStochastic, "mass is not 1");
  }

  const StateSpace& space() const { return space_; }
  int output_size() const { return space_.output_size(); }
  const std::vector<Scalar>& entries() const { return entries_; }
  const Scalar& operator()(int x0, StateIndex x) const {
    return entries_[static_cast<std::size_t>(x) * static_cast<std::size_t>(output_size()) + static_cast<std::size_t>(x0)];
  }
  std::span<const Scalar> fiber(StateIndex x) const {
    const auto d0 = static_cast<std::size_t>(output_size());
    return std::span<const Scalar>(entries_).subspan(static_cast<std::size_t>(x) * d0, d0);
  }
  Scalar fiber_mass(StateIndex x) const {
    Scalar m = Traits::zero();
    for (const auto& v : fiber(x)) m += v;
    return m;
  }
  bool fiber_is_zero(StateIndex x, double tol = kDefaultTolerance) const {
    for (const auto& v : fiber(x)) {
      if (!Traits::is_zero(v, tol)) return false;
    }
    return true;
  }
  /// {x : p̃_x ≠ 0}, sorted.
  std::vector<StateIndex> support(double tol = kDefaultTolerance) const {
    std::vector<StateIndex> out;
    for (StateIndex x = 0; x < space_.input_size(); ++x) {
      if (!fiber_is_zero(x, tol)) out.push_back(x);
    }
    return out;
  }
  std::vector<Scalar> input_marginal() const {
    std::vector<Scalar> out;
    for (StateIndex x = 0; x < space_.input_size(); ++x) out.push_back(fiber_mass(x));
    return out;
  }

  bool operator==(const JointDistribution& other) const { return space_ == other.space_ && entries_ == other.entries_; }

 private:
  StateSpace space_;
  std::vector<Scalar> entries_;
};

using RationalJoint = JointDistribution<Rational>;

/// p(x_0, x) = κ(x; x_0) p_in(x).
template <class Scalar>
JointDistribution<Scalar> joint_from(const StochasticMap<Scalar>& kappa, const std::vector<Scalar>& input) {
  const StateSpace& space = kappa.space();
  if (kappa.domain() != space.all_nodes()) throw Error(ErrorCode::IndexMismatch, "κ must be defined on X_in");
  if (input.size() != space.input_size()) throw Error(ErrorCode::IndexMismatch, "p_in needs |X_in| entries");
  std::vector<Scalar> entries;
  entries.reserve(input.size() * static_cast<std::size_t>(space.output_size()));
  for (StateIndex x = 0; x < space.input_size(); ++x) {
    for (const auto& k : kappa.row(x)) entries.push_back(k * input[x]);
  }
  return JointDistribution<Scalar>(space, std::move(entries));
}

/// A vanishing 2x2 minor that fails: p(a,x)p(b,y) ≠ p(b,x)p(a,y).
struct CiViolation {
  int x0 = 0;
  int x0_other = 0;
  StateIndex x = 0;
  StateIndex y = 0;
};

namespace detail {

/// First (r, r') with fiber_y not proportional to the nonzero pivot fiber.
template <class Scalar>
std::optional<std::pair<int, int>> proportionality_failure(std::span<const Scalar> pivot, std::span<const Scalar> other,
                                                           double tol) {
  using Traits = ScalarTraits<Scalar>;
  std::size_t r = 0;
  while (r < pivot.size() && Traits::is_zero(pivot[r], tol)) ++r;
  if (r == pivot.size()) return std::nullopt;
  double scale = 1.0;
  if constexpr (!Traits::exact) {
    scale = 0.0;
    for (std::size_t i = 0; i < pivot.size(); ++i) scale = std::max({scale, std::abs(pivot[i]), std::abs(other[i])});
    scale *= scale;
  }
  for (std::size_t i = 0; i < pivot.size(); ++i) {
    const Scalar det = pivot[r] * other[i] - pivot[i] * other[r];
    if (!Traits::is_zero(det, tol * scale)) return std::pair<int, int>{static_cast<int>(r), static_cast<int>(i)};
  }
  return std::nullopt;
}

/// Every fiber in `states` is proportional to every other (zero fibers included).
template <class Scalar>
std::optional<CiViolation> fibers_proportional(const JointDistribution<Scalar>& p, const std::vector<StateIndex>& states,
                                               double tol) {
  std::optional<StateIndex> pivot;
  for (StateIndex x : states) {
    if (!pivot) {
      if (!p.fiber_is_zero(x, tol)) pivot = x;
      continue;
    }
    if (const auto bad = proportionality_failure(p.fiber(*pivot), p.fiber(x), tol)) {
      return CiViolation{bad->first, bad->second, *pivot, x};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// X_0 ⊥ X_S given X_R = x_R, through the 2x2 minors of the d_0 x |X_S| slice.
template <class Scalar>
std::optional<CiViolation> ci_violation(const JointDistribution<Scalar>& p, NodeSet nodes, StateIndex assignment,
                                        double tol = 1e-12) {
  return detail::fibers_proportional(p, p.space().cylinder(nodes, assignment), tol);
}

template <class Scalar>
bool check_ci(const JointDistribution<Scalar>& p, NodeSet nodes, StateIndex assignment, double tol = 1e-12) {
  return !ci_violation(p, nodes, assignment, tol);
}

/// {x : p̃_x ≠ 0} split into the components of G_{R,S}.
template <class Scalar>
RobustnessStructure support_structure(const JointDistribution<Scalar>& p, const RobustnessSpec& spec,
                                      double tol = kDefaultTolerance) {
  const auto support = p.support(tol);
  if (support.empty()) throw Error(ErrorCode::EmptyDistribution, "distribution has empty support");
  return structure_of(spec, support);
}

/// CI for every spec pair; the fiber-proportionality criterion on the
/// components of the support is evaluated as well and must agree.
template <class Scalar>
bool is_r_robust_distribution(const JointDistribution<Scalar>& p, const RobustnessSpec& spec, double tol = 1e-12) {
  bool by_minors = true;
  spec.for_each_pair([&](NodeSet r, StateIndex a) {
    if (by_minors && !check_ci(p, r, a, tol)) by_minors = false;
  });
  bool by_components = true;
  const auto structure = support_structure(p, spec, tol);
  for (const auto& block : structure.blocks()) {
    if (detail::fibers_proportional(p, block, tol)) {
      by_components = false;
      break;
    }
  }
  if (by_minors != by_components) throw std::logic_error("determinantal and proportionality criteria disagree");
  return by_minors;
}

/// μ over blocks, λ_Z over each block (aligned with the block's sorted
/// states) and an output distribution p_Z per block.
template <class Scalar = Rational>
struct ComponentParams {
  std::vector<Scalar> block_weights;
  std::vector<std::vector<Scalar>> within_block;
  std::vector<std::vector<Scalar>> outputs;
};

/// p(x_0, x) = μ(Z) λ_Z(x) p_Z(x_0) for x ∈ Z, zero off ∪B.
template <class Scalar>
JointDistribution<Scalar> sample_from_component(const StateSpace& space, const RobustnessStructure& structure,
                                                const ComponentParams<Scalar>& params) {
  using Traits = ScalarTraits<Scalar>;
  const auto& blocks = structure.blocks();
  if (params.block_weights.size() != blocks.size() || params.within_block.size() != blocks.size() ||
      params.outputs.size() != blocks.size()) {
    throw Error(ErrorCode::IndexMismatch, "parameters must have one entry per block");
  }
  const auto d0 = static_cast<std::size_t>(space.output_size());
  std::vector<Scalar> entries(space.input_size() * d0, Traits::zero());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (params.within_block[b].size() != blocks[b].size()) throw Error(ErrorCode::IndexMismatch, "λ_Z has the wrong size");
    if (params.outputs[b].size() != d0) throw Error(ErrorCode::IndexMismatch, "p_Z has the wrong size");
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      const StateIndex x = blocks[b][i];
      if (x >= space.input_size()) throw Error(ErrorCode::IndexMismatch, "block state outside X_in");
      for (std::size_t j = 0; j < d0; ++j) {
        entries[x * d0 + j] = params.block_weights[b] * params.within_block[b][i] * params.outputs[b][j];
      }
    }
  }
  return JointDistribution<Scalar>(space, std::move(entries));
}

/// Random strictly positive rational parameters: integer weights 1..20, normalized.
inline ComponentParams<Rational> random_component_params(const StateSpace& space, const RobustnessStructure& structure,
                                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<int> weight(1, 20);
  const auto draw = [&](std::size_t size) {
    std::vector<Rational> v;
    Rational total = 0;
    for (std::size_t i = 0; i < size; ++i) {
      v.emplace_back(weight(rng));
      total += v.back();
    }
    for (auto& q : v) q /= total;
    return v;
  };
  ComponentParams<Rational> params;
  params.block_weights = draw(structure.size());
  for (const auto& block : structure.blocks()) {
    params.within_block.push_back(draw(block.size()));
    params.outputs.push_back(draw(static_cast<std::size_t>(space.output_size())));
  }
  return params;
}

/// p ∈ P_B: the nonzero fibers are exactly ∪B and fibers are proportional inside each block.
template <class Scalar>
bool component_membership(const JointDistribution<Scalar>& p, const RobustnessStructure& structure,
                          double tol = 1e-12) {
  const auto support = p.support(tol);
  if (support.empty()) throw Error(ErrorCode::EmptyDistribution, "distribution has empty support");
  if (support != structure.support()) return false;
  for (const auto& block : structure.blocks()) {
    if (detail::fibers_proportional(p, block, tol)) return false;
  }
  return true;
}

template <class Scalar>
struct EpsilonApproximation {
  JointDistribution<Scalar> distribution;
  RobustnessStructure target;
};

/// Moves the fraction ε of the donor fiber at y ∈ ∪B onto a new state x ∉ ∪B.
/// x must not merge blocks (it touches at most one block, and then the block
/// of y); the result lies in P_{B'} with B' the components of ∪B ∪ {x}.
template <class Scalar>
EpsilonApproximation<Scalar> epsilon_approximation(const JointDistribution<Scalar>& p, const RobustnessSpec& spec,
                                                   const RobustnessStructure& structure, StateIndex x, StateIndex y,
                                                   const Scalar& epsilon) {
  using Traits = ScalarTraits<Scalar>;
  if (epsilon < Traits::zero() || !(epsilon < Traits::one())) throw Error(ErrorCode::InvalidArgument, "ε must lie in [0, 1)");
  const StateSpace& space = p.space();
  if (x >= space.input_size() || y >= space.input_size()) throw Error(ErrorCode::InvalidWitness, "state out of range");
  if (structure.block_of(x)) throw Error(ErrorCode::InvalidWitness, "x already lies in ∪B");
  const auto donor_block = structure.block_of(y);
  if (!donor_block) throw Error(ErrorCode::InvalidWitness, "donor y is not in ∪B");
  if (p.fiber_is_zero(y)) throw Error(ErrorCode::InvalidWitness, "donor fiber is zero");
  const AdjacencyTest adjacent(spec);
  for (std::size_t b = 0; b < structure.size(); ++b) {
    if (b == *donor_block) continue;
    for (StateIndex z : structure.blocks()[b]) {
      if (adjacent(x, z)) throw Error(ErrorCode::InvalidWitness, "x touches a block other than the donor's");
    }
  }
  auto extended = structure.support();
  extended.push_back(x);
  RobustnessStructure target = structure_of(spec, std::move(extended));
  if (target.size() < structure.size()) throw Error(ErrorCode::InvalidWitness, "adding x merges blocks");

  auto entries = p.entries();
  const auto d0 = static_cast<std::size_t>(space.output_size());
  for (std::size_t j = 0; j < d0; ++j) {
    const Scalar moved = epsilon * entries[y * d0 + j];
    entries[x * d0 + j] = moved;
    entries[y * d0 + j] -= moved;
  }
  return {JointDistribution<Scalar>(space, std::move(entries)), std::move(target)};
}

/// ½ Σ |p - q|.
template <class Scalar>
Scalar total_variation(const JointDistribution<Scalar>& p, const JointDistribution<Scalar>& q) {
  if (!(p.space() == q.space())) throw Error(ErrorCode::IndexMismatch, "distributions over different spaces");
  Scalar sum = ScalarTraits<Scalar>::zero();
  for (std::size_t i = 0; i < p.entries().size(); ++i) {
    Scalar d = p.entries()[i] - q.entries()[i];
    if (d < ScalarTraits<Scalar>::zero()) d = -d;
    sum += d;
  }
  return sum / 2;
}

/// κ(x; ·) = p̃_x / |p̃_x| on nonzero fibers; other rows are undefined.
template <class Scalar>
struct PartialKernel {
  StateSpace space;
  std::vector<Scalar> entries;  // zero on undefined rows
  std::vector<bool> defined;

  std::span<const Scalar> row(StateIndex x) const {
    const auto d0 = static_cast<std::size_t>(space.output_size());
    return std::span<const Scalar>(entries).subspan(static_cast<std::size_t>(x) * d0, d0);
  }
  /// Total kernel with undefined rows replaced by `filler`.
  StochasticMap<Scalar> completed(const std::vector<Scalar>& filler) const {
    auto out = entries;
    const auto d0 = static_cast<std::size_t>(space.output_size());
    for (StateIndex x = 0; x < defined.size(); ++x) {
      if (!defined[x]) std::copy(filler.begin(), filler.end(), out.begin() + static_cast<std::ptrdiff_t>(x * d0));
    }
    return StochasticMap<Scalar>(space, space.all_nodes(), std::move(out));
  }
};

template <class Scalar>
PartialKernel<Scalar> conditional_kernel(const JointDistribution<Scalar>& p, double tol = 0.0) {
  const StateSpace& space = p.space();
  const auto d0 = static_cast<std::size_t>(space.output_size());
  PartialKernel<Scalar> out{space, std::vector<Scalar>(p.entries().size(), ScalarTraits<Scalar>::zero()),
                            std::vector<bool>(space.input_size(), false)};
  for (StateIndex x = 0; x < space.input_size(); ++x) {
    if (p.fiber_is_zero(x, tol)) continue;
    const Scalar mass = p.fiber_mass(x);
    for (std::size_t j = 0; j < d0; ++j) out.entries[x * d0 + j] = p.entries()[x * d0 + j] / mass;
    out.defined[x] = true;
  }
  return out;
}

/// A geometric-mean family for a coherent saturated spec whose κ_[n] agrees
/// with the conditional kernel of an R-robust p on its support.
template <class Scalar>
ProjectionResult extend_conditional_kernel(const JointDistribution<Scalar>& p, const RobustnessSpec& spec) {
  const auto structure = support_structure(p, spec);
  const auto kernel = conditional_kernel(p);
  std::vector<std::vector<double>> block_rows;
  for (const auto& block : structure.blocks()) {
    std::vector<double> row;
    for (const auto& v : kernel.row(block.front())) row.push_back(ScalarTraits<Scalar>::to_double(v));
    block_rows.push_back(std::move(row));
  }
  const std::vector<double> uniform(static_cast<std::size_t>(p.output_size()), 1.0 / p.output_size());
  const auto family = robust_modalities_on_structure<double>(spec, structure, block_rows,
                                                             [&](NodeSet, StateIndex) { return uniform; });
  return project_to_tilde_general(family, spec);
}

}  // namespace knockout

#pragma once

#include <vector>

#include "knockout/kernel.hpp"

namespace knockout {

/// Potentials φ_A(x_A; x_0), one table per A ⊆ [n] laid out like a kernel on X_A.
class GibbsPotentials {
 public:
  GibbsPotentials(StateSpace space, std::vector<std::vector<double>> tables);
  /// All potentials zero.
  static GibbsPotentials zero(const StateSpace& space);

  const StateSpace& space() const { return space_; }
  const std::vector<double>& table(NodeSet a) const { return tables_[a.bits()]; }
  std::vector<double>& table(NodeSet a) { return tables_[a.bits()]; }
  double value(NodeSet a, StateIndex xa, int x0) const {
    return tables_[a.bits()][static_cast<std::size_t>(xa) * static_cast<std::size_t>(space_.output_size()) +
                             static_cast<std::size_t>(x0)];
  }
  const std::vector<std::vector<double>>& tables() const { return tables_; }

 private:
  StateSpace space_;
  std::vector<std::vector<double>> tables_;
};

/// φ_A = Σ_{C⊆A} (-1)^{|A\C|} ln κ_C(x_A|_C; ·). Throws NonPositiveEntry.
GibbsPotentials moebius_potentials(const FloatModalities& modalities);

/// κ_A(x_A; ·) ∝ exp Σ_{B⊆A} φ_B(x_A|_B; ·).
FloatModalities gibbs_to_modalities(const GibbsPotentials& potentials);

/// Σ_{B ⊄ R} φ_B(x|_B; x_0) as a function of x_0.
std::vector<double> knockout_residual(const GibbsPotentials& potentials, StateIndex x, NodeSet nodes);

/// κ_[n](x) = κ_R(x|_R) decided through the residual; the direct row
/// comparison is evaluated too and a disagreement is a logic_error.
bool is_robust_via_potentials(const FloatModalities& modalities, StateIndex x, NodeSet nodes,
                              double tol = kDefaultTolerance);

struct DegenerateRow {
  NodeSet domain;
  StateIndex row = 0;
};

/// A geometric-mean closure together with the rows whose product vanished.
/// Such rows are replaced by the uniform distribution.
struct ProjectionResult {
  FloatModalities modalities;
  std::vector<DegenerateRow> degenerate;
};

/// Keeps κ_B for |B| <= k and sets κ_C ∝ (Π_{B⊆C,|B|=k} κ_B)^{1/binom(|C|,k)}.
/// Members with |C| > k of `base` are ignored. Throws NonPositiveEntry.
FloatModalities geometric_mean_extension_k(const FloatModalities& base, int k);
ProjectionResult project_to_tilde_k(const FloatModalities& modalities, int k);

/// Same with the minimal sets R^min of a coherent saturated spec:
/// κ_C ∝ (Π_{R∈R^min, R⊆C} κ_R)^{1/#}, and κ_C kept when no R ⊆ C.
FloatModalities geometric_mean_extension_general(const RobustnessSpec& spec, const FloatModalities& base);
ProjectionResult project_to_tilde_general(const FloatModalities& modalities, const RobustnessSpec& spec);

/// Sets B carrying a nonzero interaction of ln κ(x_A; x_0) after removing
/// everything that does not depend on x_0 (uniform ANOVA over X_A).
/// Tolerance is tol * max(1, max |ln κ|). Throws NonPositiveEntry.
std::vector<NodeSet> interaction_support(const FloatMap& kappa, double tol = kDefaultTolerance);
/// Largest |B| in interaction_support, 0 if empty.
int interaction_order(const FloatMap& kappa, double tol = kDefaultTolerance);

/// Every κ_A has its interactions inside Δ(A). Spec must be coherent and saturated.
bool delta_interaction_check(const FloatModalities& modalities, const RobustnessSpec& spec,
                             double tol = kDefaultTolerance);

/// Gauge coefficient α_{A,B} of a geometric-mean family: φ_A = Σ_{B⊆A,|B|<=k} α_{A,B} ln κ_B.
double tilde_k_coefficient(NodeSet a, NodeSet b, int k);
/// The potentials of geometric_mean_extension_k(base, k) assembled from ln κ_B through α.
GibbsPotentials potentials_from_base(const FloatModalities& base, int k);

/// φ with everything independent of x_0 removed (per-row mean subtracted).
GibbsPotentials center_potentials(const GibbsPotentials& potentials);
/// Max |difference| of centered tables.
double potential_distance(const GibbsPotentials& a, const GibbsPotentials& b);

}  // namespace knockout

#pragma once

#include <limits>
#include <vector>

#include "knockout/kernel.hpp"

namespace knockout {

/// A sigmoid threshold unit on spins: input index 0 is spin -1, index 1 is
/// spin +1, and the same for the output. beta may be +infinity.
struct ThresholdParams {
  std::vector<Rational> weights;
  Rational eta;
  double beta = 1.0;
};

/// The binary space {2, 2, ..., 2} with one input per weight.
StateSpace spin_space(std::size_t inputs);

/// κ_A(x_A; x_0) ∝ exp(β/2 (Σ_{i∈A} w_i x_i - η) x_0). Finite β only.
FloatModalities threshold_modalities(const ThresholdParams& params);

/// κ_A(x_A; x_0) ∝ exp(β/2 ((n/|A|) Σ_{i∈A} w_i x_i - η) x_0), κ_∅ uniform.
FloatModalities renormalized_threshold_modalities(const ThresholdParams& params);

/// β -> ∞: κ_A(x_A; +1) = θ(argument) with θ(0) = 1/2, computed exactly.
RationalModalities threshold_limit(const std::vector<Rational>& weights, const Rational& eta, bool renormalized);

}  // namespace knockout

#include "knockout/neural.hpp"

#include <cmath>

#include "knockout/errors.hpp"

namespace knockout {

namespace {

int spin(int index) { return index == 0 ? -1 : 1; }

/// Σ_{i∈A} w_i x_i, scaled by n/|A| when renormalized, minus η. Empty in the
/// renormalized case means "no drive at all".
std::optional<Rational> drive(const std::vector<Rational>& weights, const Rational& eta, bool renormalized,
                              const StateSpace& space, NodeSet a, StateIndex xa) {
  if (renormalized && a.empty()) return std::nullopt;
  Rational sum = 0;
  const auto nodes = a.nodes();
  const auto values = space.assignment(a, xa);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    sum += weights[static_cast<std::size_t>(nodes[j] - 1)] * spin(values[j]);
  }
  if (renormalized) sum *= Rational(static_cast<long>(weights.size()), static_cast<long>(a.size()));
  return Rational(sum - eta);
}

FloatModalities sigmoid_family(const ThresholdParams& params, bool renormalized) {
  if (params.weights.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one weight");
  if (!(params.beta > 0.0) || !std::isfinite(params.beta)) {
    throw Error(ErrorCode::InvalidArgument, "β must be positive and finite; use threshold_limit for β = ∞");
  }
  const StateSpace space = spin_space(params.weights.size());
  return modalities_from_rows<double>(space, [&](NodeSet a, StateIndex xa) {
    const auto h = drive(params.weights, params.eta, renormalized, space, a, xa);
    if (!h) return std::vector<double>{0.5, 0.5};
    // P(+1) = 1 / (1 + exp(-β h)); written to stay finite for large |β h|
    const double t = params.beta * h->get_d();
    const double plus = t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
    return std::vector<double>{1.0 - plus, plus};
  });
}

}  // namespace

StateSpace spin_space(std::size_t inputs) {
  return StateSpace(std::vector<int>(inputs + 1, 2));
}

FloatModalities threshold_modalities(const ThresholdParams& params) { return sigmoid_family(params, false); }

FloatModalities renormalized_threshold_modalities(const ThresholdParams& params) {
  return sigmoid_family(params, true);
}

RationalModalities threshold_limit(const std::vector<Rational>& weights, const Rational& eta, bool renormalized) {
  if (weights.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one weight");
  const StateSpace space = spin_space(weights.size());
  return modalities_from_rows<Rational>(space, [&](NodeSet a, StateIndex xa) {
    const auto h = drive(weights, eta, renormalized, space, a, xa);
    const Rational half(1, 2);
    if (!h || sgn(*h) == 0) return std::vector<Rational>{half, half};
    if (sgn(*h) > 0) return std::vector<Rational>{Rational(0), Rational(1)};
    return std::vector<Rational>{Rational(1), Rational(0)};
  });
}

}  // namespace knockout

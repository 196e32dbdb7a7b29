#pragma once

#include <optional>
#include <random>
#include <vector>

#include "knockout/errors.hpp"
#include "knockout/scalar.hpp"

namespace testing {

// Code of the knockout::Error thrown by f, or nullopt.
template <class F>
std::optional<knockout::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const knockout::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::vector<knockout::Rational> random_distribution(std::size_t size, std::mt19937_64& rng, int max_weight = 9) {
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<knockout::Rational> out;
  knockout::Rational total = 0;
  for (std::size_t i = 0; i < size; ++i) {
    out.emplace_back(weight(rng));
    total += out.back();
  }
  for (auto& q : out) q /= total;
  return out;
}

// Strictly positive, entries bounded below by roughly 1e-2.
inline std::vector<double> random_positive_row(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> out;
  double total = 0;
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(u(rng));
    total += out.back();
  }
  for (auto& v : out) v /= total;
  return out;
}

}  // namespace testing

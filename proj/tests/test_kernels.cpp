#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "knockout/kernel.hpp"
#include "knockout/structures.hpp"
#include "oracles.hpp"

using namespace knockout;
using testing::error_of;

namespace {

DeterministicMap boolean(const StateSpace& s, const std::vector<int>& table) { return DeterministicMap(s, table); }

// All 16 Boolean functions of two inputs, truth table indexed by x = 2 x_1 + x_2.
std::vector<DeterministicMap> all_binary_functions(const StateSpace& s) {
  std::vector<DeterministicMap> out;
  for (int code = 0; code < 16; ++code) {
    std::vector<int> table;
    for (int x = 0; x < 4; ++x) table.push_back((code >> x) & 1);
    out.emplace_back(s, table);
  }
  return out;
}

RationalMap random_kernel(const StateSpace& s, std::mt19937_64& rng, const std::vector<std::vector<Rational>>& pool) {
  std::vector<Rational> entries;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (StateIndex x = 0; x < s.input_size(); ++x) {
    const auto& row = pool[pick(rng)];
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return RationalMap(s, s.all_nodes(), std::move(entries));
}

// Robustness on S by brute force: rows agree across every oracle edge inside S.
bool robust_oracle(const RationalMap& kappa, const RobustnessSpec& spec, const std::vector<StateIndex>& states) {
  const auto problem = oracle::from_spec(spec);
  for (StateIndex x : states) {
    for (StateIndex y : states) {
      if (oracle::adjacent(problem, x, y) && kappa.row_vector(x) != kappa.row_vector(y)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("stochastic map validation") {
  const StateSpace s({2, 2});
  CHECK(error_of([&] { RationalMap(s, s.all_nodes(), {Rational(1), Rational(0), Rational(1, 2)}); }) == ErrorCode::IndexMismatch);
  CHECK(error_of([&] { RationalMap(s, s.all_nodes(), {Rational(1), Rational(0), Rational(1, 2), Rational(1, 3)}); }) ==
        ErrorCode::NotStochastic);
  CHECK(error_of([&] { RationalMap(s, s.all_nodes(), {Rational(2), Rational(-1), Rational(1, 2), Rational(1, 2)}); }) ==
        ErrorCode::NotStochastic);
  CHECK_NOTHROW(FloatMap(s, s.all_nodes(), {0.3, 0.7, 1.0 - 1e-14, 1e-14}));
  CHECK(error_of([&] { FloatMap(s, s.all_nodes(), {0.3, 0.7 + 1e-9, 1.0, 0.0}); }) == ErrorCode::NotStochastic);
  const RationalMap empty_input(s, NodeSet(), {Rational(1, 3), Rational(2, 3)});
  CHECK(empty_input.num_rows() == 1);
  CHECK(empty_input == RationalMap::constant(s, NodeSet(), {Rational(1, 3), Rational(2, 3)}));
}

TEST_CASE("deterministic maps as kernels") {
  const StateSpace s({2, 2, 2});
  const auto constant = from_function(boolean(s, {1, 1, 1, 1}));
  CHECK(constant == RationalMap::constant(s, s.all_nodes(), {Rational(0), Rational(1)}));
  for (StateIndex x = 0; x < 4; ++x) CHECK(constant.row_vector(x) == std::vector<Rational>{0, 1});

  const auto xor_map = DeterministicMap::tabulate(s, [](const std::vector<int>& c) { return c[0] ^ c[1]; });
  CHECK(xor_map.values() == std::vector<int>{0, 1, 1, 0});
  const auto k = from_function(xor_map);
  for (StateIndex x = 0; x < 4; ++x) {
    const auto row = k.row_vector(x);
    CHECK(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()) == xor_map(x));
  }
  CHECK(error_of([&] { boolean(s, {0, 1, 2, 0}); }) == ErrorCode::InvalidValue);
}

TEST_CASE("robustness of XOR") {
  const StateSpace s({2, 2, 2});
  const auto r1 = make_rk_spec(s, 1);
  const auto xor_kernel = from_function(boolean(s, {0, 1, 1, 0}));
  CHECK_FALSE(is_r_robust_map(xor_kernel, r1, all_states(s)));
  const auto w = robustness_witness(xor_kernel, r1, all_states(s));
  REQUIRE(w.has_value());
  CHECK(s.hamming(w->x, w->y) == 1);
  // (0,0) and (1,1) share no coordinate
  CHECK(is_r_robust_map(xor_kernel, r1, {0, 3}));
  CHECK(is_r_robust_map(from_function(boolean(s, {1, 1, 1, 1})), r1, all_states(s)));
}

TEST_CASE("robustness criteria agree with each other and with the oracle") {
  std::mt19937_64 rng(21);
  const std::vector<std::vector<Rational>> pool{{Rational(1), Rational(0)}, {Rational(1, 3), Rational(2, 3)}, {Rational(0), Rational(1)}};
  for (const auto& dims : {std::vector<int>{2, 2, 2, 2}, std::vector<int>{2, 3, 2}}) {
    const StateSpace s(dims);
    std::vector<RobustnessSpec> specs{make_rk_spec(s, 1), make_rk_spec(s, 2), make_canalyzing_spec(s, 1, 0)};
    for (const auto& spec : specs) {
      for (int trial = 0; trial < 60; ++trial) {
        const auto kappa = random_kernel(s, rng, pool);
        std::vector<StateIndex> states;
        std::bernoulli_distribution keep(0.5);
        for (StateIndex x = 0; x < s.input_size(); ++x) {
          if (keep(rng)) states.push_back(x);
        }
        const bool expected = robust_oracle(kappa, spec, states);
        CHECK(robust_pairwise(kappa, spec, states) == expected);
        CHECK(constant_on_cylinders(kappa, spec, states) == expected);
        CHECK(constant_on_components(kappa, spec, states) == expected);
        CHECK(is_r_robust_map(kappa, spec, states) == expected);
        // the coherent closure induces the same graph
        CHECK(is_r_robust_map(kappa, coherent_closure(spec), states) == expected);
      }
    }
  }
}

TEST_CASE("float robustness uses the tolerance") {
  const StateSpace s({2, 2});
  const FloatMap near(s, s.all_nodes(), {0.5, 0.5, 0.5 + 1e-12, 0.5 - 1e-12});
  const auto r0 = make_rk_spec(s, 0);
  CHECK(is_r_robust_map(near, r0, all_states(s)));
  CHECK_FALSE(is_r_robust_map(near, r0, all_states(s), 1e-14));
}

TEST_CASE("canalyzing predicates") {
  const StateSpace s({2, 2, 2});
  const auto or_f = boolean(s, {0, 1, 1, 1});
  CHECK(is_canalyzing(or_f, NodeSet::of({1}), 1));
  CHECK_FALSE(is_canalyzing(or_f, NodeSet::of({1}), 0));
  const auto xor_f = boolean(s, {0, 1, 1, 0});
  for (NodeSet r : {NodeSet(), NodeSet::of({1}), NodeSet::of({2})}) {
    for (StateIndex a = 0; a < s.size_of(r); ++a) CHECK_FALSE(is_canalyzing(xor_f, r, a));
  }
  RobustnessSpec top(s);
  top.add_all(s.all_nodes());
  for (const auto& f : all_binary_functions(s)) CHECK(is_r_canalyzing(f, top));

  // constant b on C({1}, a_1) and on the rest
  const StateSpace s3({2, 2, 2, 2});
  const auto nested = make_nested_canalyzing_spec(s3, {0, 1, 0});
  const auto f = DeterministicMap::tabulate(s3, [](const std::vector<int>& c) { return c[0] == 0 ? 1 : (c[1] == 1 ? 0 : 1); });
  CHECK(is_r_canalyzing(f, nested));
}

TEST_CASE("canalyzing equals robustness of the deterministic kernel") {
  const StateSpace s({2, 2, 2});
  std::vector<RobustnessSpec> specs{make_rk_spec(s, 0), make_rk_spec(s, 1), make_rk_spec(s, 2),
                                    make_canalyzing_spec(s, 1, 0), make_canalyzing_spec(s, 2, 1),
                                    make_nested_canalyzing_spec(s, {1, 1})};
  for (const auto& spec : specs) {
    for (const auto& f : all_binary_functions(s)) {
      CHECK(is_r_canalyzing(f, spec) == is_r_robust_map(from_function(f), spec, all_states(s)));
    }
  }
  std::mt19937_64 rng(4);
  const StateSpace t({3, 2, 3, 2});
  std::uniform_int_distribution<int> out(0, 2);
  const std::vector<RobustnessSpec> big{make_rk_spec(t, 2), make_canalyzing_spec(t, 2, 2), make_nested_canalyzing_spec(t, {0, 1, 1})};
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = DeterministicMap::tabulate(t, [&](const std::vector<int>&) { return trial % 3 == 0 ? 1 : out(rng); });
    for (const auto& spec : big) CHECK(is_r_canalyzing(f, spec) == is_r_robust_map(from_function(f), spec, all_states(t)));
  }
}

TEST_CASE("modality robustness") {
  const StateSpace s({2, 2, 2});
  const auto r1 = make_rk_spec(s, 1);
  const std::vector<Rational> q{Rational(1, 4), Rational(3, 4)};
  const auto constant = modalities_from_rows<Rational>(s, [&](NodeSet, StateIndex) { return q; });
  CHECK(is_r_robust_modalities(constant, r1, all_states(s)));
  CHECK(is_r_robust_modalities(constant, make_canalyzing_spec(s, 2, 0), all_states(s)));

  const auto perturbed = modalities_from_rows<Rational>(s, [&](NodeSet a, StateIndex xa) {
    if (a == NodeSet::of({1}) && xa == 1) return std::vector<Rational>{Rational(1, 2), Rational(1, 2)};
    return q;
  });
  CHECK_FALSE(is_r_robust_modalities(perturbed, r1, all_states(s)));
  CHECK(is_r_robust_modalities(perturbed, r1, {0}));
}

TEST_CASE("factorization through a structure") {
  const StateSpace s({2, 2, 2, 2, 2});
  const auto spec = make_rk_spec(s, 3);
  std::vector<StateIndex> set;
  for (int v : {0, 2, 5, 7, 8, 10, 13, 15}) set.push_back(static_cast<StateIndex>(v));
  const auto structure = structure_of(spec, set);
  const std::vector<Rational> a{Rational(1, 5), Rational(4, 5)}, b{Rational(2, 3), Rational(1, 3)};
  std::vector<Rational> entries;
  for (StateIndex x = 0; x < s.input_size(); ++x) {
    const auto& row = s.coordinate(x, 2) == 0 ? a : b;
    entries.insert(entries.end(), row.begin(), row.end());
  }
  const RationalMap kappa(s, s.all_nodes(), entries);
  const auto factor = factorize_through_structure(kappa, structure);
  CHECK(factor.size() == 2);
  for (StateIndex x : set) CHECK(compose_through_structure(factor, structure, x) == kappa.row_vector(x));

  const auto flat = from_function(DeterministicMap(s, std::vector<int>(16, 0)));
  CHECK(factorize_through_structure(flat, structure) == std::vector<std::vector<Rational>>(2, {Rational(1), Rational(0)}));

  const auto parity = from_function(DeterministicMap::tabulate(s, [](const std::vector<int>& c) { return c[0] ^ c[2]; }));
  CHECK(error_of([&] { factorize_through_structure(parity, structure); }) == ErrorCode::NotConstantOnBlock);
}

TEST_CASE("extended kernel") {
  std::mt19937_64 rng(9);
  const StateSpace s({3, 2, 3});
  const auto family = modalities_from_rows<Rational>(s, [&](NodeSet, StateIndex) { return testing::random_distribution(3, rng); });
  const auto hat = hat_kappa(family);
  const StateSpace& ext = hat.space();
  CHECK(ext.cardinalities() == std::vector<int>{3, 3, 4});
  for (StateIndex x = 0; x < s.input_size(); ++x) {
    CHECK(hat.row_vector(ext.index(s.coordinates(x))) == family.full().row_vector(x));
  }
  CHECK(hat.row_vector(ext.index(std::vector<int>{2, 3})) == family[NodeSet()].row_vector(0));
  CHECK(hat.row_vector(ext.index(std::vector<int>{2, 1})) == family[NodeSet::of({2})].row_vector(1));
  CHECK(modalities_from_hat(hat, s) == family);
}

TEST_CASE("robust families built on a structure") {
  std::mt19937_64 rng(12);
  const StateSpace s({2, 2, 2, 2});
  const auto spec = make_rk_spec(s, 2);
  for (const auto& b : enumerate_maximal_structures(spec)) {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < b.size(); ++i) rows.push_back(testing::random_distribution(2, rng));
    const auto family = robust_modalities_on_structure<Rational>(
        spec, b, rows, [&](NodeSet, StateIndex) { return testing::random_distribution(2, rng); });
    CHECK(is_r_robust_modalities(family, spec, b.support()));
    CHECK(is_r_robust_map(family.full(), spec, b.support()));
  }
}

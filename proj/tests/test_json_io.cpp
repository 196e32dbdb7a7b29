#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "knockout/json_io.hpp"
#include "knockout/neural.hpp"

using namespace knockout;
using testing::error_of;

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("+0.1") == Rational(1, 10));
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(format_rational(Rational(6, 8)) == "3/4");
  for (const char* bad : {"", "1/0", "a", "1.2.3", "1/", "--1"}) {
    CHECK(error_of([&] { parse_rational(bad); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("spec round trip") {
  const StateSpace s({2, 3, 2, 2});
  RobustnessSpec spec = make_canalyzing_spec(s, 2, 1);
  spec.add_all(NodeSet::of({1, 3}));
  spec.add(NodeSet(), std::vector<int>{});
  const auto j = spec_to_json(spec);
  CHECK(spec_from_json(j) == spec);
  CHECK(spec_to_json(spec_from_json(j)).dump() == j.dump());

  const auto parsed = spec_from_json(parse_json(R"({"cardinalities":[2,2,2],"pairs":[{"R":[1],"x":[0]},{"R":[2],"x":"ALL"}]})"));
  CHECK(parsed.contains(NodeSet::of({1}), 0));
  CHECK_FALSE(parsed.contains(NodeSet::of({1}), 1));
  CHECK(parsed.entries().at(NodeSet::of({2})).all);

  CHECK(error_of([] { spec_from_json(parse_json(R"({"cardinalities":[2,2],"pairs":[{"R":[1],"x":"SOME"}]})")); }) ==
        ErrorCode::ParseError);
  CHECK(error_of([] { spec_from_json(parse_json(R"({"cardinalities":[2,2],"pairs":[{"R":[2],"x":[0]}]})")); }) ==
        ErrorCode::InvalidNode);
  CHECK(error_of([] { spec_from_json(parse_json(R"({"pairs":[]})")); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_json("{"); }) == ErrorCode::ParseError);
}

TEST_CASE("structures and state sets") {
  const RobustnessStructure b({{3, 1}, {6}});
  CHECK(structure_to_json(b).dump() == R"({"blocks":[[1,3],[6]]})");
  CHECK(structure_from_json(structure_to_json(b)) == b);

  const StateSpace s({2, 2, 2, 2});
  const auto states = states_from_json(s, parse_json(R"({"states":[[1,1,1],2,[0,0,0],2]})"));
  CHECK(states == std::vector<StateIndex>{0, 2, 7});
  CHECK(states_to_json(states).dump() == R"({"states":[0,2,7]})");
  CHECK(error_of([&] { states_from_json(s, parse_json(R"({"states":[8]})")); }).has_value());
}

TEST_CASE("kernel round trip") {
  const StateSpace s({3, 2, 2});
  const RationalMap k(s, NodeSet::of({2}), {Rational(1, 2), Rational(1, 3), Rational(1, 6), Rational(0), Rational(0), Rational(1)});
  const auto j = kernel_to_json(k);
  CHECK(j["rows"]["0"][1] == "1/3");
  CHECK(kernel_from_json<Rational>(j) == k);

  Json bare = j;
  bare.erase("cardinalities");
  CHECK(kernel_from_json<Rational>(bare, &s) == k);
  CHECK(error_of([&] { kernel_from_json<Rational>(bare); }) == ErrorCode::ParseError);

  const auto f = kernel_from_json<double>(parse_json(R"({"cardinalities":[2,2],"rows":{"0":[0.25,0.75],"1":["1/2","1/2"]}})"));
  CHECK(f(0, 1) == 0.75);
  CHECK(f(1, 0) == 0.5);

  CHECK(error_of([] { kernel_from_json<Rational>(parse_json(R"({"cardinalities":[2,2],"rows":{"0":[1,0]}})")); }) ==
        ErrorCode::IndexMismatch);
  CHECK(error_of([] { kernel_from_json<Rational>(parse_json(R"({"cardinalities":[2,2],"rows":{"x":[1,0],"1":[1,0]}})")); }) ==
        ErrorCode::ParseError);
  CHECK(error_of([] { kernel_from_json<Rational>(parse_json(R"({"cardinalities":[2,2],"rows":{"0":[1,1],"1":[1,0]}})")); }) ==
        ErrorCode::NotStochastic);
}

TEST_CASE("modalities and potentials round trip") {
  const auto family = threshold_limit({Rational(1), Rational(-1, 2)}, Rational(1, 4), true);
  CHECK(modalities_from_json<Rational>(modalities_to_json(family)) == family);

  const auto smooth = threshold_modalities({{Rational(1), Rational(2)}, Rational(0), 0.5});
  const auto back = modalities_from_json<double>(modalities_to_json(smooth));
  CHECK(back == smooth);

  const auto phi = moebius_potentials(smooth);
  const auto phi_back = potentials_from_json(potentials_to_json(phi));
  CHECK(phi_back.tables() == phi.tables());

  Json missing = modalities_to_json(family);
  missing["modalities"].erase(0);
  CHECK(error_of([&] { modalities_from_json<Rational>(missing); }) == ErrorCode::IndexMismatch);
  CHECK(error_of([] { potentials_from_json(parse_json(R"({"cardinalities":[2,2],"potentials":[{"domain":[1],"rows":{"z":[0,0]}}]})")); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("distribution round trip") {
  const StateSpace s({2, 2, 2});
  const RationalJoint p(s, {Rational(1, 4), 0, 0, 0, Rational(1, 8), Rational(3, 8), 0, Rational(1, 4)});
  const auto j = distribution_to_json(p);
  CHECK(j["entries"].size() == 4);
  CHECK(j["entries"]["(1,2)"] == "3/8");
  CHECK(distribution_from_json<Rational>(j) == p);
  CHECK(parse_entry_key("(1,7)") == std::pair<int, StateIndex>{1, 7});
  for (const char* bad : {"1,7", "(1,7", "(1;7)", "(1,7)x"}) CHECK(error_of([&] { parse_entry_key(bad); }) == ErrorCode::ParseError);
  CHECK(error_of([] { distribution_from_json<Rational>(parse_json(R"j({"cardinalities":[2,2],"entries":{"(2,0)":"1"}})j")); }) ==
        ErrorCode::IndexMismatch);
  CHECK(error_of([] { distribution_from_json<Rational>(parse_json(R"j({"cardinalities":[2,2],"entries":{"(0,0)":"1/2"}})j")); }) ==
        ErrorCode::NotStochastic);
}

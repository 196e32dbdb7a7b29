#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "knockout/gibbs.hpp"
#include "knockout/joint.hpp"
#include "knockout/kernel.hpp"

namespace knockout {

using Json = nlohmann::ordered_json;

/// Parses text, mapping syntax errors to ParseError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

StateSpace space_from_json(const Json& j);
Json space_to_json(const StateSpace& space);

/// {"cardinalities": [...], "pairs": [{"R": [...], "x": [...] | "ALL"}]}; pairs in canonical order.
Json spec_to_json(const RobustnessSpec& spec);
RobustnessSpec spec_from_json(const Json& j);

/// {"blocks": [[state indices], ...]}.
Json structure_to_json(const RobustnessStructure& structure);
RobustnessStructure structure_from_json(const Json& j);

/// {"states": [index | [coordinates], ...]}.
std::vector<StateIndex> states_from_json(const StateSpace& space, const Json& j);
Json states_to_json(const std::vector<StateIndex>& states);

NodeSet nodes_from_json(const Json& j);
Json nodes_to_json(NodeSet nodes);

template <class Scalar>
Scalar scalar_from_json(const Json& j);
template <>
inline Rational scalar_from_json<Rational>(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return Rational(j.get<double>());
  throw Error(ErrorCode::ParseError, "expected a number or a \"p/q\" string");
}
template <>
inline double scalar_from_json<double>(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  if (j.is_number()) return j.get<double>();
  throw Error(ErrorCode::ParseError, "expected a number or a \"p/q\" string");
}

inline Json scalar_to_json(const Rational& q) { return format_rational(q); }
inline Json scalar_to_json(double v) { return v; }

/// {"cardinalities": [...], "domain": [...], "rows": {"index": [p, ...]}}.
template <class Scalar>
Json kernel_to_json(const StochasticMap<Scalar>& kappa) {
  Json rows = Json::object();
  for (StateIndex r = 0; r < kappa.num_rows(); ++r) {
    Json row = Json::array();
    for (const auto& v : kappa.row(r)) row.push_back(scalar_to_json(v));
    rows[std::to_string(r)] = std::move(row);
  }
  return Json{{"cardinalities", kappa.space().cardinalities()}, {"domain", nodes_to_json(kappa.domain())}, {"rows", rows}};
}

inline StateSpace embedded_or_given_space(const Json& j, const StateSpace* space) {
  if (j.contains("cardinalities")) return space_from_json(j);
  if (!space) throw Error(ErrorCode::ParseError, "no \"cardinalities\" given");
  return *space;
}

/// `space` is used when the object carries no "cardinalities" of its own.
template <class Scalar>
StochasticMap<Scalar> kernel_from_json(const Json& j, const StateSpace* space = nullptr) {
  try {
    const StateSpace own = embedded_or_given_space(j, space);
    const NodeSet domain = j.contains("domain") ? nodes_from_json(j.at("domain")) : own.all_nodes();
    const auto d0 = static_cast<std::size_t>(own.output_size());
    const auto rows = own.size_of(domain);
    std::vector<Scalar> entries(rows * d0);
    std::vector<bool> seen(rows, false);
    for (const auto& [key, row] : j.at("rows").items()) {
      std::size_t pos = 0;
      const unsigned long r = std::stoul(key, &pos);
      if (pos != key.size() || r >= rows) throw Error(ErrorCode::ParseError, "bad row index '" + key + "'");
      if (row.size() != d0) throw Error(ErrorCode::IndexMismatch, "row " + key + " needs d_0 entries");
      for (std::size_t i = 0; i < d0; ++i) entries[r * d0 + i] = scalar_from_json<Scalar>(row.at(i));
      seen[r] = true;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (!seen[r]) throw Error(ErrorCode::IndexMismatch, "row " + std::to_string(r) + " missing");
    }
    return StochasticMap<Scalar>(own, domain, std::move(entries));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "bad row index");
  }
}

/// {"cardinalities": [...], "modalities": [kernel, ...]}; any order of members.
template <class Scalar>
Json modalities_to_json(const FunctionalModalities<Scalar>& modalities) {
  Json members = Json::array();
  for (NodeSet a : all_subsets(modalities.space().num_inputs())) {
    Json k = kernel_to_json(modalities[a]);
    k.erase("cardinalities");
    members.push_back(std::move(k));
  }
  return Json{{"cardinalities", modalities.space().cardinalities()}, {"modalities", members}};
}

template <class Scalar>
FunctionalModalities<Scalar> modalities_from_json(const Json& j) {
  try {
    const StateSpace space = space_from_json(j);
    std::vector<std::optional<StochasticMap<Scalar>>> slots(std::size_t{1} << space.num_inputs());
    for (const auto& member : j.at("modalities")) {
      auto kappa = kernel_from_json<Scalar>(member, &space);
      const auto bits = kappa.domain().bits();
      if (slots[bits]) throw Error(ErrorCode::IndexMismatch, "duplicate modality " + kappa.domain().to_string());
      slots[bits] = std::move(kappa);
    }
    std::vector<StochasticMap<Scalar>> members;
    for (std::size_t a = 0; a < slots.size(); ++a) {
      if (!slots[a]) {
        throw Error(ErrorCode::IndexMismatch, "modality " + NodeSet(static_cast<std::uint32_t>(a)).to_string() + " missing");
      }
      members.push_back(std::move(*slots[a]));
    }
    return FunctionalModalities<Scalar>(std::move(members));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

/// {"cardinalities": [...], "potentials": [{"domain": [...], "rows": {...}}]}.
Json potentials_to_json(const GibbsPotentials& potentials);
GibbsPotentials potentials_from_json(const Json& j);

/// {"cardinalities": [...], "entries": {"(x0,x)": "p/q"}}; absent entries are zero.
template <class Scalar>
Json distribution_to_json(const JointDistribution<Scalar>& p) {
  Json entries = Json::object();
  for (StateIndex x = 0; x < p.space().input_size(); ++x) {
    for (int x0 = 0; x0 < p.output_size(); ++x0) {
      if (ScalarTraits<Scalar>::is_zero(p(x0, x), 0.0)) continue;
      entries["(" + std::to_string(x0) + "," + std::to_string(x) + ")"] = scalar_to_json(p(x0, x));
    }
  }
  return Json{{"cardinalities", p.space().cardinalities()}, {"entries", entries}};
}

/// Parses "(x0,x)" keys.
std::pair<int, StateIndex> parse_entry_key(const std::string& key);

template <class Scalar>
JointDistribution<Scalar> distribution_from_json(const Json& j) {
  try {
    const StateSpace space = space_from_json(j);
    const auto d0 = static_cast<std::size_t>(space.output_size());
    std::vector<Scalar> entries(space.input_size() * d0, ScalarTraits<Scalar>::zero());
    for (const auto& [key, value] : j.at("entries").items()) {
      const auto [x0, x] = parse_entry_key(key);
      if (x0 < 0 || static_cast<std::size_t>(x0) >= d0 || x >= space.input_size()) {
        throw Error(ErrorCode::IndexMismatch, "entry " + key + " out of range");
      }
      entries[x * d0 + static_cast<std::size_t>(x0)] = scalar_from_json<Scalar>(value);
    }
    return JointDistribution<Scalar>(space, std::move(entries));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace knockout

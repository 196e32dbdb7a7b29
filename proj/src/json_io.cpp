#include "knockout/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace knockout {

namespace {

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

Json parse_json(const std::string& text) {
  return guarded([&] { return Json::parse(text); });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

StateSpace space_from_json(const Json& j) {
  return guarded([&] { return StateSpace(j.at("cardinalities").get<std::vector<int>>()); });
}

Json space_to_json(const StateSpace& space) { return Json{{"cardinalities", space.cardinalities()}}; }

NodeSet nodes_from_json(const Json& j) {
  return guarded([&] { return NodeSet::of(j.get<std::vector<int>>()); });
}

Json nodes_to_json(NodeSet nodes) { return nodes.nodes(); }

Json spec_to_json(const RobustnessSpec& spec) {
  Json pairs = Json::array();
  for (const auto& [r, entry] : spec.entries()) {
    if (entry.all) {
      pairs.push_back(Json{{"R", nodes_to_json(r)}, {"x", "ALL"}});
      continue;
    }
    for (StateIndex a : entry.assignments) {
      pairs.push_back(Json{{"R", nodes_to_json(r)}, {"x", spec.space().assignment(r, a)}});
    }
  }
  return Json{{"cardinalities", spec.space().cardinalities()}, {"pairs", pairs}};
}

RobustnessSpec spec_from_json(const Json& j) {
  return guarded([&] {
    RobustnessSpec spec(space_from_json(j));
    for (const auto& pair : j.at("pairs")) {
      const NodeSet r = nodes_from_json(pair.at("R"));
      const auto& x = pair.at("x");
      if (x.is_string()) {
        if (x.get<std::string>() != "ALL") throw Error(ErrorCode::ParseError, "x must be an array or \"ALL\"");
        spec.add_all(r);
      } else {
        const auto values = x.get<std::vector<int>>();
        spec.add(r, values);
      }
    }
    return spec;
  });
}

Json structure_to_json(const RobustnessStructure& structure) {
  return Json{{"blocks", structure.blocks()}};
}

RobustnessStructure structure_from_json(const Json& j) {
  return guarded([&] { return RobustnessStructure(j.at("blocks").get<std::vector<std::vector<StateIndex>>>()); });
}

std::vector<StateIndex> states_from_json(const StateSpace& space, const Json& j) {
  return guarded([&] {
    std::vector<StateIndex> states;
    for (const auto& s : j.at("states")) {
      if (s.is_array()) {
        states.push_back(space.index(s.get<std::vector<int>>()));
      } else {
        states.push_back(s.get<StateIndex>());
      }
    }
    return normalize_states(space, std::move(states));
  });
}

Json states_to_json(const std::vector<StateIndex>& states) { return Json{{"states", states}}; }

Json potentials_to_json(const GibbsPotentials& potentials) {
  const StateSpace& space = potentials.space();
  const auto d0 = static_cast<std::size_t>(space.output_size());
  Json members = Json::array();
  for (NodeSet a : all_subsets(space.num_inputs())) {
    Json rows = Json::object();
    const auto& table = potentials.table(a);
    for (std::size_t r = 0; r * d0 < table.size(); ++r) {
      rows[std::to_string(r)] = std::vector<double>(table.begin() + static_cast<std::ptrdiff_t>(r * d0),
                                                    table.begin() + static_cast<std::ptrdiff_t>((r + 1) * d0));
    }
    members.push_back(Json{{"domain", nodes_to_json(a)}, {"rows", rows}});
  }
  return Json{{"cardinalities", space.cardinalities()}, {"potentials", members}};
}

GibbsPotentials potentials_from_json(const Json& j) {
  return guarded([&] {
    const StateSpace space = space_from_json(j);
    const auto d0 = static_cast<std::size_t>(space.output_size());
    std::vector<std::vector<double>> tables(std::size_t{1} << space.num_inputs());
    for (const auto& member : j.at("potentials")) {
      const NodeSet a = nodes_from_json(member.at("domain"));
      auto& table = tables.at(a.bits());
      table.assign(space.size_of(a) * d0, 0.0);
      for (const auto& [key, row] : member.at("rows").items()) {
        const auto r = static_cast<std::size_t>(std::stoul(key));
        if (r >= space.size_of(a) || row.size() != d0) throw Error(ErrorCode::IndexMismatch, "bad potential row " + key);
        for (std::size_t i = 0; i < d0; ++i) table[r * d0 + i] = scalar_from_json<double>(row.at(i));
      }
    }
    return GibbsPotentials(space, std::move(tables));
  });
}

std::pair<int, StateIndex> parse_entry_key(const std::string& key) {
  int x0 = 0;
  unsigned long x = 0;
  char open = 0, comma = 0, close = 0;
  std::istringstream in(key);
  if (!(in >> open >> x0 >> comma >> x >> close) || open != '(' || comma != ',' || close != ')' ||
      in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::ParseError, "entry key must look like \"(x0,x)\", got '" + key + "'");
  }
  return {x0, static_cast<StateIndex>(x)};
}

}  // namespace knockout

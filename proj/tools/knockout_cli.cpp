// knockout: command-line front end for robustness specifications, robustness
// graphs and structures, Gibbs potentials and robust joint distributions.
//
// Exit status: 0 success, 2 the checked property is false, 1 error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "knockout/dot.hpp"
#include "knockout/gibbs.hpp"
#include "knockout/joint.hpp"
#include "knockout/json_io.hpp"
#include "knockout/neural.hpp"
#include "knockout/structures.hpp"

namespace {

using namespace knockout;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kPropertyFalse = 2;

struct Options {
  std::string mode = "rational";
  double tol = kDefaultTolerance;
  std::uint64_t seed = 1;
  std::string out;

  std::string spec;
  std::string set;
  std::string dot;
  std::string kernel;
  std::string modalities;
  std::string potentials;
  std::string dist;
  std::string structure;
  std::string space;
  std::string nodes;
  std::string weights;
  std::string eta = "0";
  std::string beta = "1";
  std::optional<int> k;
  int n = 0;
  int d = 2;
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  bool symmetry = false;
  bool classes = false;
  bool renormalized = false;
  bool order = false;
  bool closure = false;
  std::string canalyzing;
  std::string nested;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "not an integer list: '" + text + "'");
    }
  }
  return out;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + o.out);
  file << text;
}

void emit(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  file << text;
}

RobustnessSpec load_spec(const Options& o) {
  if (o.spec.empty()) throw Error(ErrorCode::InvalidArgument, "--spec is required");
  return spec_from_json(read_json_file(o.spec));
}

std::vector<StateIndex> load_states(const Options& o, const StateSpace& space) {
  if (o.set.empty()) return all_states(space);
  return states_from_json(space, read_json_file(o.set));
}

bool float_mode(const Options& o) {
  if (o.mode == "rational") return false;
  if (o.mode == "float") return true;
  throw Error(ErrorCode::InvalidArgument, "--mode must be rational or float");
}

Json witness_json(const StateSpace& space, StateIndex x, StateIndex y) {
  return Json{{"x", x}, {"y", y}, {"x_label", space.label(x)}, {"y_label", space.label(y)}};
}

int run_make_spec(const Options& o) {
  const StateSpace space(int_list(o.space));
  std::optional<RobustnessSpec> spec;
  if (o.k) spec = make_rk_spec(space, *o.k);
  if (!o.canalyzing.empty()) {
    const auto v = int_list(o.canalyzing);
    if (v.size() != 2) throw Error(ErrorCode::InvalidArgument, "--canalyzing takes node,value");
    spec = make_canalyzing_spec(space, v[0], v[1]);
  }
  if (!o.nested.empty()) spec = make_nested_canalyzing_spec(space, int_list(o.nested));
  if (!spec) throw Error(ErrorCode::InvalidArgument, "give one of --k, --canalyzing, --nested");
  if (o.closure) spec = coherent_closure(*spec);
  emit(o, spec_to_json(*spec).dump() + "\n");
  return kOk;
}

int run_graph(const Options& o) {
  const auto spec = load_spec(o);
  const auto graph = build_graph(spec, load_states(o, spec.space()));
  if (!o.dot.empty()) write_text(o.dot, export_dot(graph));
  if (o.dot != "-" || !o.out.empty()) emit(o, Json{{"vertices", graph.vertices()}, {"edges", graph.edges()}});
  return kOk;
}

int run_components(const Options& o) {
  const auto spec = load_spec(o);
  const auto states = load_states(o, spec.space());
  const auto structure = structure_of(spec, states);
  if (!o.dot.empty()) write_text(o.dot, export_dot(build_graph(spec, states), structure));
  Json j = structure_to_json(structure);
  j["count"] = structure.size();
  if (o.dot != "-" || !o.out.empty()) emit(o, j);
  return kOk;
}

int run_maximal(const Options& o) {
  const auto spec = load_spec(o);
  if (!o.structure.empty()) {
    const auto structure = structure_from_json(read_json_file(o.structure));
    const bool maximal = is_maximal(structure, spec);
    emit(o, Json{{"maximal", maximal}});
    return maximal ? kOk : kPropertyFalse;
  }
  EnumerationOptions options;
  options.limit = o.limit;
  options.symmetry_reduce = o.symmetry;
  const auto structures = enumerate_maximal_structures(spec, options);
  Json list = Json::array();
  for (const auto& s : structures) list.push_back(structure_to_json(s)["blocks"]);
  Json j{{"count", structures.size()}, {"structures", list}};
  if (o.classes) {
    Json classes = Json::array();
    for (const auto& c : complement_symmetry_classes(spec, structures)) {
      classes.push_back(Json{{"complement", c.representative}, {"count", c.count}});
    }
    j["classes"] = classes;
  }
  emit(o, j);
  return kOk;
}

template <class Scalar>
int check_robust_kernel(const Options& o, const RobustnessSpec& spec) {
  const auto kappa = kernel_from_json<Scalar>(read_json_file(o.kernel), &spec.space());
  if (!(kappa.space() == spec.space())) throw Error(ErrorCode::IndexMismatch, "kernel and spec spaces differ");
  const auto states = load_states(o, spec.space());
  const bool robust = is_r_robust_map(kappa, spec, states, o.tol);
  Json j{{"robust", robust}};
  if (!robust) {
    const auto w = robustness_witness(kappa, spec, states, o.tol);
    if (w) j["witness"] = witness_json(spec.space(), w->x, w->y);
  }
  emit(o, j);
  return robust ? kOk : kPropertyFalse;
}

template <class Scalar>
int check_robust_modalities(const Options& o, const RobustnessSpec& spec) {
  const auto modalities = modalities_from_json<Scalar>(read_json_file(o.modalities));
  if (!(modalities.space() == spec.space())) throw Error(ErrorCode::IndexMismatch, "modality and spec spaces differ");
  const bool robust = is_r_robust_modalities(modalities, spec, load_states(o, spec.space()), o.tol);
  emit(o, Json{{"robust", robust}});
  return robust ? kOk : kPropertyFalse;
}

int run_check_robust(const Options& o) {
  const auto spec = load_spec(o);
  if (!o.kernel.empty()) {
    return float_mode(o) ? check_robust_kernel<double>(o, spec) : check_robust_kernel<Rational>(o, spec);
  }
  if (!o.modalities.empty()) {
    return float_mode(o) ? check_robust_modalities<double>(o, spec) : check_robust_modalities<Rational>(o, spec);
  }
  throw Error(ErrorCode::InvalidArgument, "give --kernel or --modalities");
}

int run_gibbs(const Options& o) {
  if (!o.potentials.empty()) {
    emit(o, modalities_to_json(gibbs_to_modalities(potentials_from_json(read_json_file(o.potentials)))));
    return kOk;
  }
  if (o.modalities.empty()) throw Error(ErrorCode::InvalidArgument, "give --modalities or --potentials");
  const auto modalities = modalities_from_json<double>(read_json_file(o.modalities));
  if (o.order) {
    Json orders = Json::array();
    for (const auto& member : modalities.members()) {
      orders.push_back(Json{{"domain", nodes_to_json(member.domain())}, {"order", interaction_order(member, o.tol)}});
    }
    emit(o, Json{{"interaction_orders", orders}});
    return kOk;
  }
  emit(o, potentials_to_json(moebius_potentials(modalities)));
  return kOk;
}

int run_project(const Options& o) {
  if (o.modalities.empty()) throw Error(ErrorCode::InvalidArgument, "--modalities is required");
  const auto modalities = modalities_from_json<double>(read_json_file(o.modalities));
  const ProjectionResult result = o.k ? project_to_tilde_k(modalities, *o.k) : project_to_tilde_general(modalities, load_spec(o));
  Json j = modalities_to_json(result.modalities);
  Json degenerate = Json::array();
  for (const auto& row : result.degenerate) {
    degenerate.push_back(Json{{"domain", nodes_to_json(row.domain)}, {"row", row.row}});
  }
  j["degenerate_rows"] = degenerate;
  emit(o, j);
  return kOk;
}

template <class Scalar>
int verify_ci(const Options& o) {
  const auto p = distribution_from_json<Scalar>(read_json_file(o.dist));
  const double tol = ScalarTraits<Scalar>::exact ? 0.0 : o.tol;
  if (!o.structure.empty()) {
    const bool member = component_membership(p, structure_from_json(read_json_file(o.structure)), tol);
    emit(o, Json{{"member", member}});
    return member ? kOk : kPropertyFalse;
  }
  const auto spec = load_spec(o);
  if (!(spec.space() == p.space())) throw Error(ErrorCode::IndexMismatch, "distribution and spec spaces differ");
  const bool robust = is_r_robust_distribution(p, spec, tol);
  Json j{{"robust", robust}};
  if (!robust) {
    spec.for_each_pair([&](NodeSet r, StateIndex a) {
      if (j.contains("violation")) return;
      if (const auto v = ci_violation(p, r, a, tol)) {
        j["violation"] = Json{{"R", nodes_to_json(r)}, {"x_R", p.space().assignment(r, a)}, {"x0", v->x0},
                              {"x0_other", v->x0_other}, {"x", v->x}, {"y", v->y}};
      }
    });
  }
  emit(o, j);
  return robust ? kOk : kPropertyFalse;
}

int run_ci(const Options& o) {
  if (o.dist.empty()) throw Error(ErrorCode::InvalidArgument, "--dist is required");
  return float_mode(o) ? verify_ci<double>(o) : verify_ci<Rational>(o);
}

int run_sample(const Options& o) {
  const auto spec = load_spec(o);
  std::mt19937_64 rng(o.seed);
  RobustnessStructure structure;
  if (!o.structure.empty()) {
    structure = structure_from_json(read_json_file(o.structure));
    if (structure_of(spec, structure.support()) != structure) {
      throw Error(ErrorCode::InconsistentStructure, "blocks are not the components of their union");
    }
  } else {
    const auto all = enumerate_structures(spec);
    structure = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  }
  const auto params = random_component_params(spec.space(), structure, rng);
  const auto p = sample_from_component(spec.space(), structure, params);
  Json j = distribution_to_json(p);
  j["structure"] = structure_to_json(structure)["blocks"];
  emit(o, j);
  return kOk;
}

int run_decompose(const Options& o) {
  const auto spec = load_spec(o);
  if (o.dist.empty()) throw Error(ErrorCode::InvalidArgument, "--dist is required");
  const auto p = distribution_from_json<Rational>(read_json_file(o.dist));
  const auto structure = support_structure(p, spec);
  const bool robust = is_r_robust_distribution(p, spec);
  Json j = structure_to_json(structure);
  j["robust"] = robust;
  j["maximal"] = is_maximal(structure, spec);
  emit(o, j);
  return robust ? kOk : kPropertyFalse;
}

int run_bound(const Options& o) {
  const auto spec = load_spec(o);
  const NodeSet nodes = NodeSet::of(int_list(o.nodes));
  emit(o, Json{{"R", nodes_to_json(nodes)}, {"bound", structure_size_bound(spec, nodes)}});
  return kOk;
}

int run_code_size(const Options& o) {
  if (!o.k) throw Error(ErrorCode::InvalidArgument, "--k is required");
  emit(o, Json{{"n", o.n}, {"k", *o.k}, {"d", o.d}, {"size", max_singleton_code_size(o.n, *o.k, o.d)}});
  return kOk;
}

int run_neuron(const Options& o) {
  std::vector<Rational> weights;
  for (const auto& w : split_list(o.weights)) weights.push_back(parse_rational(w));
  const Rational eta = parse_rational(o.eta);
  if (o.beta == "inf" || o.beta == "infinity") {
    emit(o, modalities_to_json(threshold_limit(weights, eta, o.renormalized)));
    return kOk;
  }
  const double beta = parse_rational(o.beta).get_d();
  const ThresholdParams params{weights, eta, beta};
  emit(o, modalities_to_json(o.renormalized ? renormalized_threshold_modalities(params) : threshold_modalities(params)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knockout-robust stochastic maps: robustness graphs, structures, Gibbs potentials and CI checks"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--mode", o.mode, "Numeric mode: rational or float")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--tol", o.tol, "Comparison tolerance in float mode")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for randomized generators");
  app.add_option("--out", o.out, "Output path (default stdout)");

  const auto spec_opt = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--spec", o.spec, "Spec JSON {cardinalities, pairs:[{R, x|\"ALL\"}]}");
    if (required) opt->required();
  };
  const auto set_opt = [&](CLI::App* sub) {
    sub->add_option("--set", o.set, "State set JSON {states:[index | [coords]]} (default: all of X_in)");
  };

  auto* make_spec = app.add_subcommand("make-spec", "Write R_k, canalyzing or nested canalyzing specs");
  make_spec->add_option("--space", o.space, "Cardinalities d0,d1,...,dn")->required();
  make_spec->add_option("--k", o.k, "R_k");
  make_spec->add_option("--canalyzing", o.canalyzing, "node,value");
  make_spec->add_option("--nested", o.nested, "a_1,...,a_n");
  make_spec->add_flag("--closure", o.closure, "Replace by the coherent closure");

  auto* graph = app.add_subcommand("graph", "Edges of G_{R,S}");
  spec_opt(graph);
  set_opt(graph);
  graph->add_option("--dot", o.dot, "Write Graphviz DOT here ('-' for stdout)");

  auto* components = app.add_subcommand("components", "Connected components of G_{R,S}");
  spec_opt(components);
  set_opt(components);
  components->add_option("--dot", o.dot, "Write clustered Graphviz DOT here ('-' for stdout)");

  auto* maximal = app.add_subcommand("maximal", "Enumerate maximal structures, or test one with --structure");
  spec_opt(maximal);
  maximal->add_option("--structure", o.structure, "Structure JSON {blocks:[[...]]}");
  maximal->add_option("--limit", o.limit, "Stop after this many structures");
  maximal->add_flag("--symmetry", o.symmetry, "One structure per orbit of graph automorphisms");
  maximal->add_flag("--classes", o.classes, "Report complement symmetry classes");

  auto* check = app.add_subcommand("check-robust", "Is a kernel (or modality family) robust on S");
  spec_opt(check);
  set_opt(check);
  check->add_option("--kernel", o.kernel, "Kernel JSON {domain, rows:{index:[...]}}");
  check->add_option("--modalities", o.modalities, "Modalities JSON {cardinalities, modalities:[...]}");

  auto* gibbs = app.add_subcommand("gibbs", "Möbius potentials of a modality family, or the family of potentials");
  gibbs->add_option("--modalities", o.modalities, "Modalities JSON");
  gibbs->add_option("--potentials", o.potentials, "Potentials JSON");
  gibbs->add_flag("--order", o.order, "Print the interaction order of every member instead");

  auto* project = app.add_subcommand("project", "Geometric-mean projection (--k or --spec)");
  project->add_option("--modalities", o.modalities, "Modalities JSON")->required();
  project->add_option("--k", o.k, "Use the k-subsets");
  spec_opt(project, false);

  auto* ci = app.add_subcommand("ci", "Conditional-independence check of a joint distribution");
  ci->alias("verify-ci");
  spec_opt(ci, false);
  ci->add_option("--dist", o.dist, "Distribution JSON {cardinalities, entries:{\"(x0,x)\":\"p/q\"}}")->required();
  ci->add_option("--structure", o.structure, "Test membership in P_B instead");

  auto* sample = app.add_subcommand("sample", "Random R-robust joint distribution supported on a structure");
  sample->alias("sample-joint");
  spec_opt(sample);
  sample->add_option("--structure", o.structure, "Structure JSON (default: random enumerated structure)");

  auto* decompose = app.add_subcommand("decompose-support", "Support structure of a joint distribution");
  spec_opt(decompose);
  decompose->add_option("--dist", o.dist, "Distribution JSON")->required();

  auto* bound = app.add_subcommand("bound", "Upper bound on the number of blocks");
  spec_opt(bound);
  bound->add_option("--nodes", o.nodes, "R as a comma list, e.g. 1,2")->required();

  auto* code = app.add_subcommand("code-size", "Largest set with pairwise Hamming distance >= n-k+1");
  code->add_option("--n", o.n, "Number of inputs")->required();
  code->add_option("--k", o.k, "k")->required();
  code->add_option("--d", o.d, "Alphabet size");

  auto* neuron = app.add_subcommand("neuron", "Threshold-unit modalities");
  neuron->add_option("--weights", o.weights, "w_1,...,w_n as decimals or p/q")->required();
  neuron->add_option("--eta", o.eta, "Threshold");
  neuron->add_option("--beta", o.beta, "Inverse temperature, or inf");
  neuron->add_flag("--renormalized", o.renormalized, "Scale surviving weights by n/|A|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  try {
    if (*make_spec) return run_make_spec(o);
    if (*graph) return run_graph(o);
    if (*components) return run_components(o);
    if (*maximal) return run_maximal(o);
    if (*check) return run_check_robust(o);
    if (*gibbs) return run_gibbs(o);
    if (*project) return run_project(o);
    if (*ci) return run_ci(o);
    if (*sample) return run_sample(o);
    if (*decompose) return run_decompose(o);
    if (*bound) return run_bound(o);
    if (*code) return run_code_size(o);
    if (*neuron) return run_neuron(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

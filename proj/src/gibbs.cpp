#include "knockout/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "knockout/errors.hpp"

namespace knockout {

namespace {

constexpr int kMaxGibbsNodes = 12;

void check_size(const StateSpace& space) {
  if (space.num_inputs() > kMaxGibbsNodes) {
    throw Error(ErrorCode::StateSpaceTooLarge, "Gibbs computations support at most 12 input nodes");
  }
}

std::size_t d0_of(const StateSpace& space) { return static_cast<std::size_t>(space.output_size()); }

/// Applies f(value_at_v, value_at_knockout) in place along coordinate j of an
/// extended table (row-major, x_0 innermost), for every v below the knockout value.
template <class F>
void along_coordinate(std::vector<double>& table, const std::vector<int>& ext_dims, std::size_t j, std::size_t d0, F&& f) {
  std::size_t inner = d0;
  for (std::size_t i = j + 1; i < ext_dims.size(); ++i) inner *= static_cast<std::size_t>(ext_dims[i]);
  const auto e = static_cast<std::size_t>(ext_dims[j]);
  const std::size_t outer = table.size() / (inner * e);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * e * inner;
    for (std::size_t v = 0; v + 1 < e; ++v) {
      for (std::size_t t = 0; t < inner; ++t) {
        f(table[base + v * inner + t], table[base + (e - 1) * inner + t]);
      }
    }
  }
}

std::vector<int> extended_dims(const StateSpace& space) {
  std::vector<int> dims;
  for (int i = 1; i <= space.num_inputs(); ++i) dims.push_back(space.cardinality(i) + 1);
  return dims;
}

/// Per-subset tables -> one table over the extended inputs.
std::vector<double> to_extended(const StateSpace& space, const std::vector<std::vector<double>>& tables) {
  const StateSpace extended = extended_space(space);
  const std::size_t d0 = d0_of(space);
  std::vector<double> out(extended.input_size() * d0);
  for (StateIndex y = 0; y < extended.input_size(); ++y) {
    const auto [support, a] = split_extended(space, extended, y);
    std::copy_n(tables[support.bits()].begin() + static_cast<std::ptrdiff_t>(a * d0), d0,
                out.begin() + static_cast<std::ptrdiff_t>(y * d0));
  }
  return out;
}

std::vector<std::vector<double>> from_extended(const StateSpace& space, const std::vector<double>& table) {
  const StateSpace extended = extended_space(space);
  const std::size_t d0 = d0_of(space);
  std::vector<std::vector<double>> tables(std::size_t{1} << space.num_inputs());
  for (std::size_t a = 0; a < tables.size(); ++a) {
    tables[a].resize(space.size_of(NodeSet(static_cast<std::uint32_t>(a))) * d0);
  }
  for (StateIndex y = 0; y < extended.input_size(); ++y) {
    const auto [support, a] = split_extended(space, extended, y);
    std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(y * d0), d0,
                tables[support.bits()].begin() + static_cast<std::ptrdiff_t>(a * d0));
  }
  return tables;
}

std::vector<double> log_entries(const FloatMap& kappa) {
  std::vector<double> out;
  out.reserve(kappa.entries().size());
  for (std::size_t i = 0; i < kappa.entries().size(); ++i) {
    const double v = kappa.entries()[i];
    if (!(v > 0.0)) {
      const std::size_t d0 = static_cast<std::size_t>(kappa.output_size());
      throw Error(ErrorCode::NonPositiveEntry, "κ_" + kappa.domain().to_string() + " row " + std::to_string(i / d0) +
                                                   ", x_0 = " + std::to_string(i % d0));
    }
    out.push_back(std::log(v));
  }
  return out;
}

/// Row-wise softmax of an exponent table.
std::vector<double> softmax_rows(const std::vector<double>& exponents, std::size_t d0) {
  std::vector<double> out(exponents.size());
  for (std::size_t r = 0; r < exponents.size(); r += d0) {
    const double top = *std::max_element(exponents.begin() + static_cast<std::ptrdiff_t>(r),
                                         exponents.begin() + static_cast<std::ptrdiff_t>(r + d0));
    double sum = 0.0;
    for (std::size_t j = 0; j < d0; ++j) sum += out[r + j] = std::exp(exponents[r + j] - top);
    for (std::size_t j = 0; j < d0; ++j) out[r + j] /= sum;
  }
  return out;
}

/// Members with C ⊆ R-family given by `parts`: nullopt keeps κ_C.
using ClosureRule = std::function<std::optional<std::vector<NodeSet>>(NodeSet)>;

ProjectionResult geometric_closure(const FloatModalities& modalities, const ClosureRule& rule) {
  const StateSpace& space = modalities.space();
  const std::size_t d0 = d0_of(space);
  std::vector<DegenerateRow> degenerate;
  std::vector<FloatMap> members;
  for (std::uint32_t bits = 0; bits < (1u << space.num_inputs()); ++bits) {
    const NodeSet c(bits);
    const auto parts = rule(c);
    if (!parts) {
      members.push_back(modalities[c]);
      continue;
    }
    const double exponent = 1.0 / static_cast<double>(parts->size());
    std::vector<double> entries;
    entries.reserve(space.size_of(c) * d0);
    for (std::uint64_t xc = 0; xc < space.size_of(c); ++xc) {
      std::vector<double> row(d0, 1.0);
      for (NodeSet r : *parts) {
        const auto source = modalities[r].row(space.restrict_assignment(c, static_cast<StateIndex>(xc), r));
        for (std::size_t j = 0; j < d0; ++j) row[j] *= std::pow(source[j], exponent);
      }
      double sum = 0.0;
      for (double v : row) sum += v;
      if (sum > 0.0) {
        for (double& v : row) v /= sum;
      } else {
        degenerate.push_back({c, static_cast<StateIndex>(xc)});
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(d0));
      }
      entries.insert(entries.end(), row.begin(), row.end());
    }
    members.emplace_back(space, c, std::move(entries));
  }
  return {FloatModalities(std::move(members)), std::move(degenerate)};
}

ClosureRule k_rule(int n, int k) {
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidK, "k = " + std::to_string(k));
  return [k](NodeSet c) -> std::optional<std::vector<NodeSet>> {
    if (c.size() <= k) return std::nullopt;
    std::vector<NodeSet> parts;
    const std::uint32_t bits = c.bits();
    for (std::uint32_t sub = bits;; sub = (sub - 1) & bits) {
      if (NodeSet(sub).size() == k) parts.emplace_back(sub);
      if (sub == 0) break;
    }
    return parts;
  };
}

ClosureRule general_rule(const RobustnessSpec& spec) {
  if (!is_coherent(spec)) throw Error(ErrorCode::NotCoherent, "geometric-mean families need a coherent spec");
  if (!is_saturated(spec)) throw Error(ErrorCode::NotSaturated, "geometric-mean families need a saturated spec");
  const auto minimal = r_min(spec, 0);
  return [minimal](NodeSet c) -> std::optional<std::vector<NodeSet>> {
    std::vector<NodeSet> parts;
    for (NodeSet r : minimal) {
      if (r.subset_of(c)) parts.push_back(r);
    }
    if (parts.empty()) return std::nullopt;
    return parts;
  };
}

void require_positive(const FloatMap& kappa) { (void)log_entries(kappa); }

}  // namespace

GibbsPotentials::GibbsPotentials(StateSpace space, std::vector<std::vector<double>> tables)
    : space_(std::move(space)), tables_(std::move(tables)) {
  check_size(space_);
  if (tables_.size() != (std::size_t{1} << space_.num_inputs())) {
    throw Error(ErrorCode::IndexMismatch, "need one potential per subset of [n]");
  }
  for (std::size_t a = 0; a < tables_.size(); ++a) {
    if (tables_[a].size() != space_.size_of(NodeSet(static_cast<std::uint32_t>(a))) * d0_of(space_)) {
      throw Error(ErrorCode::IndexMismatch, "potential table " + NodeSet(static_cast<std::uint32_t>(a)).to_string() +
                                                " has the wrong size");
    }
    for (double v : tables_[a]) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidValue, "non-finite potential");
    }
  }
}

GibbsPotentials GibbsPotentials::zero(const StateSpace& space) {
  std::vector<std::vector<double>> tables;
  for (std::uint32_t a = 0; a < (1u << space.num_inputs()); ++a) {
    tables.emplace_back(space.size_of(NodeSet(a)) * d0_of(space), 0.0);
  }
  return GibbsPotentials(space, std::move(tables));
}

GibbsPotentials moebius_potentials(const FloatModalities& modalities) {
  const StateSpace& space = modalities.space();
  check_size(space);
  std::vector<std::vector<double>> logs;
  for (const auto& member : modalities.members()) logs.push_back(log_entries(member));
  auto table = to_extended(space, logs);
  const auto dims = extended_dims(space);
  for (std::size_t j = 0; j < dims.size(); ++j) {
    along_coordinate(table, dims, j, d0_of(space), [](double& value, double knocked) { value -= knocked; });
  }
  return GibbsPotentials(space, from_extended(space, table));
}

FloatModalities gibbs_to_modalities(const GibbsPotentials& potentials) {
  const StateSpace& space = potentials.space();
  auto table = to_extended(space, potentials.tables());
  const auto dims = extended_dims(space);
  for (std::size_t j = 0; j < dims.size(); ++j) {
    along_coordinate(table, dims, j, d0_of(space), [](double& value, double knocked) { value += knocked; });
  }
  auto tables = from_extended(space, table);
  std::vector<FloatMap> members;
  for (std::size_t a = 0; a < tables.size(); ++a) {
    members.emplace_back(space, NodeSet(static_cast<std::uint32_t>(a)), softmax_rows(tables[a], d0_of(space)));
  }
  return FloatModalities(std::move(members));
}

std::vector<double> knockout_residual(const GibbsPotentials& potentials, StateIndex x, NodeSet nodes) {
  const StateSpace& space = potentials.space();
  std::vector<double> residual(d0_of(space), 0.0);
  for (std::uint32_t bits = 0; bits < (1u << space.num_inputs()); ++bits) {
    const NodeSet b(bits);
    if (b.subset_of(nodes)) continue;
    const StateIndex xb = space.restrict(x, b);
    for (int x0 = 0; x0 < space.output_size(); ++x0) residual[static_cast<std::size_t>(x0)] += potentials.value(b, xb, x0);
  }
  return residual;
}

bool is_robust_via_potentials(const FloatModalities& modalities, StateIndex x, NodeSet nodes, double tol) {
  const auto residual = knockout_residual(moebius_potentials(modalities), x, nodes);
  const auto [lo, hi] = std::minmax_element(residual.begin(), residual.end());
  double scale = 1.0;
  for (double v : residual) scale = std::max(scale, std::abs(v));
  const bool constant = *hi - *lo <= tol * scale;
  const bool direct =
      rows_equal(modalities.full().row(x), modalities[nodes].row(modalities.space().restrict(x, nodes)), tol);
  if (constant != direct) throw std::logic_error("potential residual and direct robustness check disagree");
  return constant;
}

FloatModalities geometric_mean_extension_k(const FloatModalities& base, int k) {
  const StateSpace& space = base.space();
  const auto rule = k_rule(space.num_inputs(), k);
  for (const auto& member : base.members()) {
    if (member.domain().size() <= k) require_positive(member);
  }
  return geometric_closure(base, rule).modalities;
}

ProjectionResult project_to_tilde_k(const FloatModalities& modalities, int k) {
  return geometric_closure(modalities, k_rule(modalities.space().num_inputs(), k));
}

FloatModalities geometric_mean_extension_general(const RobustnessSpec& spec, const FloatModalities& base) {
  const auto rule = general_rule(spec);
  for (const auto& member : base.members()) {
    const auto parts = rule(member.domain());
    if (!parts) require_positive(member);
    else
      for (NodeSet r : *parts) require_positive(base[r]);
  }
  return geometric_closure(base, rule).modalities;
}

ProjectionResult project_to_tilde_general(const FloatModalities& modalities, const RobustnessSpec& spec) {
  return geometric_closure(modalities, general_rule(spec));
}

std::vector<NodeSet> interaction_support(const FloatMap& kappa, double tol) {
  const StateSpace& space = kappa.space();
  check_size(space);
  const std::size_t d0 = d0_of(space);
  auto table = log_entries(kappa);
  double scale = 1.0;
  for (double v : table) scale = std::max(scale, std::abs(v));
  // remove everything that does not depend on x_0
  for (std::size_t r = 0; r < table.size(); r += d0) {
    double mean = 0.0;
    for (std::size_t j = 0; j < d0; ++j) mean += table[r + j];
    mean /= static_cast<double>(d0);
    for (std::size_t j = 0; j < d0; ++j) table[r + j] -= mean;
  }
  const std::vector<int> nodes = kappa.domain().nodes();
  std::vector<int> dims;
  for (int node : nodes) dims.push_back(space.cardinality(node));
  // uniform ANOVA, one coordinate at a time: the extra slot holds the mean,
  // the other slots the deviation from it
  for (std::size_t j = 0; j < dims.size(); ++j) {
    std::size_t inner = d0;
    for (std::size_t i = j + 1; i < dims.size(); ++i) inner *= static_cast<std::size_t>(dims[i]);
    const auto d = static_cast<std::size_t>(dims[j]);
    const std::size_t outer = table.size() / (inner * d);
    std::vector<double> next(outer * (d + 1) * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t t = 0; t < inner; ++t) {
        double mean = 0.0;
        for (std::size_t v = 0; v < d; ++v) mean += table[(o * d + v) * inner + t];
        mean /= static_cast<double>(d);
        for (std::size_t v = 0; v < d; ++v) next[(o * (d + 1) + v) * inner + t] = table[(o * d + v) * inner + t] - mean;
        next[(o * (d + 1) + d) * inner + t] = mean;
      }
    }
    table = std::move(next);
    ++dims[j];
  }
  std::vector<double> largest(std::size_t{1} << nodes.size(), 0.0);
  const std::size_t cells = table.size() / d0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    std::uint32_t pattern = 0;  // bit j set when coordinate j is not averaged out
    for (std::size_t j = dims.size(); j-- > 0;) {
      const auto e = static_cast<std::size_t>(dims[j]);
      if (rest % e != e - 1) pattern |= 1u << j;
      rest /= e;
    }
    for (std::size_t x0 = 0; x0 < d0; ++x0) largest[pattern] = std::max(largest[pattern], std::abs(table[cell * d0 + x0]));
  }
  std::vector<NodeSet> out;
  for (std::uint32_t pattern = 0; pattern < largest.size(); ++pattern) {
    if (largest[pattern] <= tol * scale) continue;
    std::uint32_t bits = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (pattern & (1u << j)) bits |= 1u << (nodes[j] - 1);
    }
    out.emplace_back(bits);
  }
  std::sort(out.begin(), out.end(), CanonicalNodeSetLess{});
  return out;
}

int interaction_order(const FloatMap& kappa, double tol) {
  int order = 0;
  for (NodeSet b : interaction_support(kappa, tol)) order = std::max(order, b.size());
  return order;
}

bool delta_interaction_check(const FloatModalities& modalities, const RobustnessSpec& spec, double tol) {
  if (!is_coherent(spec)) throw Error(ErrorCode::NotCoherent, "Δ-interaction check needs a coherent spec");
  const SubsetFamily delta = delta_family(spec);
  for (const auto& member : modalities.members()) {
    for (NodeSet b : interaction_support(member, tol)) {
      if (!delta.contains(b)) return false;
    }
  }
  return true;
}

double tilde_k_coefficient(NodeSet a, NodeSet b, int k) {
  if (!b.subset_of(a) || b.size() > k) return 0.0;
  const double sign = ((a.size() - b.size()) % 2 == 0) ? 1.0 : -1.0;
  if (b.size() < k || a.size() == k) return sign;
  return sign * static_cast<double>(k) / static_cast<double>(a.size());
}

GibbsPotentials potentials_from_base(const FloatModalities& base, int k) {
  const StateSpace& space = base.space();
  if (k < 0 || k > space.num_inputs()) throw Error(ErrorCode::InvalidK, "k = " + std::to_string(k));
  const std::size_t d0 = d0_of(space);
  std::vector<std::vector<double>> logs(base.members().size());
  for (std::size_t b = 0; b < logs.size(); ++b) {
    if (NodeSet(static_cast<std::uint32_t>(b)).size() <= k) logs[b] = log_entries(base.members()[b]);
  }
  std::vector<std::vector<double>> tables;
  for (std::uint32_t bits = 0; bits < (1u << space.num_inputs()); ++bits) {
    const NodeSet a(bits);
    std::vector<double> table(space.size_of(a) * d0, 0.0);
    for (std::uint32_t sub = bits;; sub = (sub - 1) & bits) {
      const NodeSet b(sub);
      const double alpha = tilde_k_coefficient(a, b, k);
      if (alpha != 0.0) {
        for (std::uint64_t xa = 0; xa < space.size_of(a); ++xa) {
          const StateIndex xb = space.restrict_assignment(a, static_cast<StateIndex>(xa), b);
          for (std::size_t x0 = 0; x0 < d0; ++x0) table[xa * d0 + x0] += alpha * logs[sub][xb * d0 + x0];
        }
      }
      if (sub == 0) break;
    }
    tables.push_back(std::move(table));
  }
  return GibbsPotentials(space, std::move(tables));
}

GibbsPotentials center_potentials(const GibbsPotentials& potentials) {
  const std::size_t d0 = d0_of(potentials.space());
  auto tables = potentials.tables();
  for (auto& table : tables) {
    for (std::size_t r = 0; r < table.size(); r += d0) {
      double mean = 0.0;
      for (std::size_t j = 0; j < d0; ++j) mean += table[r + j];
      mean /= static_cast<double>(d0);
      for (std::size_t j = 0; j < d0; ++j) table[r + j] -= mean;
    }
  }
  return GibbsPotentials(potentials.space(), std::move(tables));
}

double potential_distance(const GibbsPotentials& a, const GibbsPotentials& b) {
  if (!(a.space() == b.space())) throw Error(ErrorCode::IndexMismatch, "potentials over different spaces");
  const auto ca = center_potentials(a);
  const auto cb = center_potentials(b);
  double worst = 0.0;
  for (std::size_t t = 0; t < ca.tables().size(); ++t) {
    for (std::size_t i = 0; i < ca.tables()[t].size(); ++i) {
      worst = std::max(worst, std::abs(ca.tables()[t][i] - cb.tables()[t][i]));
    }
  }
  return worst;
}

}  // namespace knockout

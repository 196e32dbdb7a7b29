#include "knockout/structures.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "knockout/errors.hpp"

namespace knockout {

namespace {

constexpr std::uint64_t kMaxEnumeratedStates = 24;
constexpr std::uint64_t kMaxStructureStates = 20;

std::set<std::size_t> adjacent_blocks(const RobustnessStructure& structure, const AdjacencyTest& adjacent,
                                      StateIndex x) {
  std::set<std::size_t> touched;
  for (std::size_t b = 0; b < structure.size(); ++b) {
    for (StateIndex y : structure.blocks()[b]) {
      if (adjacent(x, y)) {
        touched.insert(b);
        break;
      }
    }
  }
  return touched;
}

/// Neighbour bitmasks of G_R for spaces with at most 32 states.
std::vector<std::uint32_t> neighbor_masks(const RobustnessSpec& spec) {
  const auto graph = build_graph(spec, all_states(spec.space()));
  std::vector<std::uint32_t> masks(spec.space().input_size(), 0);
  for (const auto& [a, b] : graph.edges()) {
    masks[a] |= 1u << b;
    masks[b] |= 1u << a;
  }
  return masks;
}

std::vector<std::uint32_t> components_of_mask(std::uint32_t support, const std::vector<std::uint32_t>& neighbors) {
  std::vector<std::uint32_t> components;
  std::uint32_t remaining = support;
  while (remaining != 0) {
    std::uint32_t component = remaining & (~remaining + 1u);
    std::uint32_t frontier = component;
    while (frontier != 0) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f != 0; f &= f - 1) next |= neighbors[static_cast<std::size_t>(std::countr_zero(f))];
      next &= support & ~component;
      component |= next;
      frontier = next;
    }
    components.push_back(component);
    remaining &= ~component;
  }
  return components;
}

bool mask_is_maximal(std::uint32_t support, std::uint32_t full, const std::vector<std::uint32_t>& neighbors) {
  const std::uint32_t outside = full & ~support;
  // cheap necessary condition first: two neighbours inside the support
  for (std::uint32_t o = outside; o != 0; o &= o - 1) {
    if (std::popcount(neighbors[static_cast<std::size_t>(std::countr_zero(o))] & support) < 2) return false;
  }
  const auto components = components_of_mask(support, neighbors);
  for (std::uint32_t o = outside; o != 0; o &= o - 1) {
    const std::uint32_t touching = neighbors[static_cast<std::size_t>(std::countr_zero(o))] & support;
    int count = 0;
    for (std::uint32_t c : components) {
      if ((c & touching) != 0 && ++count >= 2) break;
    }
    if (count < 2) return false;
  }
  return true;
}

std::vector<StateIndex> mask_states(std::uint32_t mask) {
  std::vector<StateIndex> out;
  for (std::uint32_t m = mask; m != 0; m &= m - 1) out.push_back(static_cast<StateIndex>(std::countr_zero(m)));
  return out;
}

std::uint32_t permute_mask(std::uint32_t mask, const StatePermutation& perm) {
  std::uint32_t out = 0;
  for (std::uint32_t m = mask; m != 0; m &= m - 1) out |= 1u << perm[static_cast<std::size_t>(std::countr_zero(m))];
  return out;
}

/// Visits all supports of each size in canonical order; `keep` decides membership.
std::vector<RobustnessStructure> enumerate_supports(const RobustnessSpec& spec, std::size_t limit,
                                                    const std::function<bool(std::uint32_t)>& keep) {
  const auto size = static_cast<int>(spec.space().input_size());
  std::vector<RobustnessStructure> out;
  for (int k = 1; k <= size && out.size() < limit; ++k) {
    std::vector<std::uint32_t> kept;
    // Gosper's hack over all k-subsets of a size-bit word
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t end = std::uint64_t{1} << size;
    while (mask < end) {
      const auto m = static_cast<std::uint32_t>(mask);
      if (keep(m)) kept.push_back(m);
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
    std::sort(kept.begin(), kept.end(),
              [](std::uint32_t a, std::uint32_t b) { return CanonicalNodeSetLess{}(NodeSet(a), NodeSet(b)); });
    for (std::uint32_t m : kept) {
      if (out.size() >= limit) break;
      out.push_back(structure_of(spec, mask_states(m)));
    }
  }
  return out;
}

}  // namespace

bool is_maximal(const RobustnessStructure& structure, const RobustnessSpec& spec) {
  const auto support = structure.support();
  if (!support.empty() && support.back() >= spec.space().input_size()) {
    throw Error(ErrorCode::InvalidArgument, "structure contains a state outside X_in");
  }
  if (structure_of(spec, support) != structure) {
    throw Error(ErrorCode::InconsistentStructure, "blocks are not the connected components of G_{R,∪B}");
  }
  const AdjacencyTest adjacent(spec);
  bool merges_everywhere = true;
  bool bridges_everywhere = true;
  std::size_t next = 0;
  for (StateIndex x = 0; x < spec.space().input_size(); ++x) {
    if (next < support.size() && support[next] == x) {
      ++next;
      continue;
    }
    auto extended = support;
    extended.push_back(x);
    if (structure_of(spec, std::move(extended)).size() >= structure.size()) merges_everywhere = false;
    if (adjacent_blocks(structure, adjacent, x).size() < 2) bridges_everywhere = false;
  }
  if (merges_everywhere != bridges_everywhere) {
    throw std::logic_error("maximality conditions disagree");
  }
  return merges_everywhere;
}

std::vector<RobustnessStructure> enumerate_maximal_structures(const RobustnessSpec& spec,
                                                              const EnumerationOptions& options) {
  const StateSpace& space = spec.space();
  if (space.input_size() > kMaxEnumeratedStates) {
    throw Error(ErrorCode::StateSpaceTooLarge, "enumeration needs |X_in| <= 24");
  }
  const auto neighbors = neighbor_masks(spec);
  const auto full = static_cast<std::uint32_t>((std::uint64_t{1} << space.input_size()) - 1);
  std::vector<StatePermutation> group;
  if (options.symmetry_reduce) group = graph_automorphisms(spec);
  return enumerate_supports(spec, options.limit, [&](std::uint32_t support) {
    if (!mask_is_maximal(support, full, neighbors)) return false;
    for (const auto& perm : group) {
      if (CanonicalNodeSetLess{}(NodeSet(permute_mask(support, perm)), NodeSet(support))) return false;
    }
    return true;
  });
}

std::vector<RobustnessStructure> enumerate_structures(const RobustnessSpec& spec) {
  if (spec.space().input_size() > kMaxStructureStates) {
    throw Error(ErrorCode::StateSpaceTooLarge, "structure enumeration needs |X_in| <= 20");
  }
  return enumerate_supports(spec, std::numeric_limits<std::size_t>::max(), [](std::uint32_t) { return true; });
}

RobustnessStructure sample_maximal_structure(const RobustnessSpec& spec, std::mt19937_64& rng) {
  const AdjacencyTest adjacent(spec);
  std::vector<StateIndex> support;
  std::vector<StateIndex> outside = all_states(spec.space());
  RobustnessStructure current;
  bool changed = true;
  while (changed) {
    changed = false;
    std::shuffle(outside.begin(), outside.end(), rng);
    for (std::size_t i = 0; i < outside.size();) {
      const StateIndex x = outside[i];
      if (adjacent_blocks(current, adjacent, x).size() <= 1) {
        support.push_back(x);
        current = structure_of(spec, support);
        outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }
  return current;
}

std::vector<StatePermutation> space_symmetries(const StateSpace& space) {
  const int n = space.num_inputs();
  std::uint64_t group_size = 1;
  for (int i = 1; i <= n; ++i) {
    for (int v = 2; v <= space.cardinality(i); ++v) group_size *= static_cast<std::uint64_t>(v);
    if (group_size * space.input_size() > (std::uint64_t{1} << 24)) {
      throw Error(ErrorCode::StateSpaceTooLarge, "symmetry group too large");
    }
  }
  std::vector<std::vector<std::vector<int>>> value_perms(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    std::vector<int> p(static_cast<std::size_t>(space.cardinality(i)));
    std::iota(p.begin(), p.end(), 0);
    do value_perms[static_cast<std::size_t>(i)].push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  std::vector<int> coords(static_cast<std::size_t>(n));
  std::iota(coords.begin(), coords.end(), 1);
  const auto states = all_states(space);
  std::vector<std::vector<int>> coordinates;
  coordinates.reserve(states.size());
  for (StateIndex x : states) coordinates.push_back(space.coordinates(x));

  std::vector<StatePermutation> out;
  do {
    bool compatible = true;
    for (int i = 1; i <= n; ++i) {
      if (space.cardinality(coords[static_cast<std::size_t>(i - 1)]) != space.cardinality(i)) compatible = false;
    }
    if (!compatible) continue;
    // node i's value moves to node coords[i-1]
    std::vector<std::size_t> choice(static_cast<std::size_t>(n) + 1, 0);
    while (true) {
      StatePermutation perm(states.size());
      std::vector<int> image(static_cast<std::size_t>(n));
      for (StateIndex x : states) {
        const auto& c = coordinates[x];
        for (int i = 1; i <= n; ++i) {
          const auto& vp = value_perms[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
          image[static_cast<std::size_t>(coords[static_cast<std::size_t>(i - 1)] - 1)] =
              vp[static_cast<std::size_t>(c[static_cast<std::size_t>(i - 1)])];
        }
        perm[x] = space.index(image);
      }
      out.push_back(std::move(perm));
      int i = n;
      for (; i >= 1; --i) {
        auto& ch = choice[static_cast<std::size_t>(i)];
        if (++ch < value_perms[static_cast<std::size_t>(i)].size()) break;
        ch = 0;
      }
      if (i < 1) break;
    }
  } while (std::next_permutation(coords.begin(), coords.end()));
  return out;
}

std::vector<StatePermutation> graph_automorphisms(const RobustnessSpec& spec) {
  const auto graph = build_graph(spec, all_states(spec.space()));
  std::vector<StatePermutation> out;
  for (auto& perm : space_symmetries(spec.space())) {
    const bool preserves = std::all_of(graph.edges().begin(), graph.edges().end(),
                                       [&](const auto& e) { return graph.has_edge(perm[e.first], perm[e.second]); });
    if (preserves) out.push_back(std::move(perm));
  }
  return out;
}

std::vector<StateIndex> canonical_form(const std::vector<StateIndex>& states, const std::vector<StatePermutation>& group) {
  std::vector<StateIndex> best = states;
  std::sort(best.begin(), best.end());
  for (const auto& perm : group) {
    std::vector<StateIndex> image;
    image.reserve(states.size());
    for (StateIndex x : states) image.push_back(perm[x]);
    std::sort(image.begin(), image.end());
    if (image < best) best = std::move(image);
  }
  return best;
}

std::vector<SymmetryClass> complement_symmetry_classes(const RobustnessSpec& spec,
                                                       const std::vector<RobustnessStructure>& structures) {
  const auto group = graph_automorphisms(spec);
  std::map<std::vector<StateIndex>, std::size_t> counts;
  for (const auto& structure : structures) {
    const auto support = structure.support();
    std::vector<StateIndex> complement;
    for (StateIndex x = 0; x < spec.space().input_size(); ++x) {
      if (!std::binary_search(support.begin(), support.end(), x)) complement.push_back(x);
    }
    ++counts[canonical_form(complement, group)];
  }
  std::vector<SymmetryClass> out;
  for (auto& [rep, count] : counts) out.push_back({rep, count});
  std::sort(out.begin(), out.end(), [](const SymmetryClass& a, const SymmetryClass& b) {
    if (a.representative.size() != b.representative.size()) return a.representative.size() < b.representative.size();
    return a.representative < b.representative;
  });
  return out;
}

std::uint64_t structure_size_bound(const RobustnessSpec& spec, NodeSet nodes) {
  const StateSpace& space = spec.space();
  if (!nodes.subset_of(space.all_nodes())) throw Error(ErrorCode::InvalidNode, nodes.to_string());
  const std::uint64_t total = space.size_of(nodes);
  std::uint64_t covered = 0;
  if (const auto it = spec.entries().find(nodes); it != spec.entries().end()) {
    covered = it->second.all ? total : it->second.assignments.size();
  }
  return covered + (total - covered) * space.size_of(space.all_nodes() - nodes);
}

bool check_product_structure(const RobustnessStructure& structure, const StateSpace& space) {
  const int n = space.num_inputs();
  std::vector<std::set<int>> covered(static_cast<std::size_t>(n));
  for (const auto& block : structure.blocks()) {
    std::vector<std::set<int>> projections(static_cast<std::size_t>(n));
    for (StateIndex x : block) {
      const auto c = space.coordinates(x);
      for (int i = 0; i < n; ++i) projections[static_cast<std::size_t>(i)].insert(c[static_cast<std::size_t>(i)]);
    }
    std::uint64_t product = 1;
    for (int i = 0; i < n; ++i) {
      product *= projections[static_cast<std::size_t>(i)].size();
      covered[static_cast<std::size_t>(i)].insert(projections[static_cast<std::size_t>(i)].begin(),
                                                  projections[static_cast<std::size_t>(i)].end());
    }
    if (product != block.size()) return false;
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(covered[static_cast<std::size_t>(i)].size()) != space.cardinality(i + 1)) return false;
  }
  return true;
}

namespace {

/// Set partitions of {0..d-1} into exactly m parts via restricted growth strings.
std::vector<std::vector<std::vector<int>>> set_partitions(int d, int m) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> rgs(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == d) {
      if (used != m) return;
      std::vector<std::vector<int>> parts(static_cast<std::size_t>(m));
      for (int i = 0; i < d; ++i) parts[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
      out.push_back(std::move(parts));
      return;
    }
    if (used + (d - pos) < m) return;
    for (int b = 0; b <= used && b < m; ++b) {
      rgs[static_cast<std::size_t>(pos)] = b;
      rec(pos + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

std::vector<RobustnessStructure> two_input_maximal_structures(int d1, int d2) {
  if (d1 < 1 || d2 < 1 || d1 > 8 || d2 > 8) {
    throw Error(ErrorCode::InvalidCardinality, "need 1 <= d1, d2 <= 8");
  }
  const StateSpace space({2, d1, d2});
  std::vector<RobustnessStructure> out;
  for (int m = 1; m <= std::min(d1, d2); ++m) {
    const auto left = set_partitions(d1, m);
    const auto right = set_partitions(d2, m);
    for (const auto& p1 : left) {
      for (const auto& p2 : right) {
        std::vector<int> match(static_cast<std::size_t>(m));
        std::iota(match.begin(), match.end(), 0);
        do {
          std::vector<std::vector<StateIndex>> blocks;
          for (int j = 0; j < m; ++j) {
            std::vector<StateIndex> block;
            for (int a : p1[static_cast<std::size_t>(j)]) {
              for (int b : p2[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])]) {
                const int coords[2] = {a, b};
                block.push_back(space.index(coords));
              }
            }
            blocks.push_back(std::move(block));
          }
          out.emplace_back(std::move(blocks));
        } while (std::next_permutation(match.begin(), match.end()));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool smallk_connectivity_check(const RobustnessStructure& structure, const StateSpace& space, int k) {
  const int n = space.num_inputs();
  for (int i = 1; i <= n; ++i) {
    if (space.cardinality(i) != 2) throw Error(ErrorCode::NotBinary, "connectivity bound needs binary inputs");
  }
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidK, "k = " + std::to_string(k));
  for (int s = 0; s <= n - 2 * k + 1; ++s) {
    const auto spec = make_rk_spec(space, s);
    for (const auto& block : structure.blocks()) {
      if (structure_of(spec, block).size() != 1) return false;
    }
  }
  return true;
}

std::uint64_t max_singleton_code_size(int n, int k, int d) {
  if (n < 1 || d < 1) throw Error(ErrorCode::InvalidCardinality, "need n >= 1 and d >= 1");
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidK, "k = " + std::to_string(k));
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(d);
    if (total > (std::uint64_t{1} << 20)) throw Error(ErrorCode::StateSpaceTooLarge, "d^n exceeds 2^20");
  }
  const int distance = n - k + 1;
  if (distance <= 1) return total;

  std::vector<std::vector<int>> words(total, std::vector<int>(static_cast<std::size_t>(n)));
  for (std::uint64_t x = 0; x < total; ++x) {
    std::uint64_t rest = x;
    for (int i = n - 1; i >= 0; --i) {
      words[x][static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::uint64_t>(d));
      rest /= static_cast<std::uint64_t>(d);
    }
  }
  const auto far_apart = [&](std::uint64_t a, std::uint64_t b) {
    int diff = 0;
    for (int i = 0; i < n; ++i) diff += words[a][static_cast<std::size_t>(i)] != words[b][static_cast<std::size_t>(i)];
    return diff >= distance;
  };

  // The Hamming space is vertex transitive, so some optimal code contains word 0.
  std::uint64_t best = 1;
  std::function<void(std::uint64_t, const std::vector<std::uint64_t>&)> extend =
      [&](std::uint64_t size, const std::vector<std::uint64_t>& candidates) {
        if (candidates.empty()) {
          best = std::max(best, size);
          return;
        }
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          if (size + (candidates.size() - i) <= best) return;
          std::vector<std::uint64_t> next;
          for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            if (far_apart(candidates[i], candidates[j])) next.push_back(candidates[j]);
          }
          extend(size + 1, next);
        }
      };
  std::vector<std::uint64_t> start;
  for (std::uint64_t x = 1; x < total; ++x) {
    if (far_apart(0, x)) start.push_back(x);
  }
  extend(1, start);
  return best;
}

}  // namespace knockout

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "knockout/graph.hpp"

namespace knockout {

/// A permutation of X_in, perm[x] = image of x.
using StatePermutation = std::vector<StateIndex>;

/// True iff no state outside ∪B can be added without lowering the number of
/// components. Both textbook conditions are evaluated (adding x merges blocks
/// vs. x has neighbours in two distinct blocks); a disagreement is a bug and
/// raises std::logic_error. Throws InconsistentStructure when the blocks are
/// not the components of G_{R,∪B}.
bool is_maximal(const RobustnessStructure& structure, const RobustnessSpec& spec);

struct EnumerationOptions {
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  /// Keep one representative per orbit of the automorphisms of G_R that come
  /// from relabelling coordinates and values.
  bool symmetry_reduce = false;
};

/// Maximal structures, one per support, ordered by support size and then
/// lexicographically. Requires |X_in| <= 24 (StateSpaceTooLarge).
std::vector<RobustnessStructure> enumerate_maximal_structures(const RobustnessSpec& spec,
                                                              const EnumerationOptions& options = {});

/// Component structures of every nonempty S ⊆ X_in, same order. |X_in| <= 20.
std::vector<RobustnessStructure> enumerate_structures(const RobustnessSpec& spec);

/// Random maximal structure: states are offered in random order and kept
/// while they touch at most one block, until nothing more can be added.
RobustnessStructure sample_maximal_structure(const RobustnessSpec& spec, std::mt19937_64& rng);

/// Relabellings of X_in: permutations of coordinates with equal alphabets
/// combined with value permutations on every coordinate.
std::vector<StatePermutation> space_symmetries(const StateSpace& space);
/// Those space symmetries that map G_R onto itself.
std::vector<StatePermutation> graph_automorphisms(const RobustnessSpec& spec);
/// Smallest image of a state set (canonical order) under the given group.
std::vector<StateIndex> canonical_form(const std::vector<StateIndex>& states, const std::vector<StatePermutation>& group);

struct SymmetryClass {
  std::vector<StateIndex> representative;  // canonical form of the complement X_in \ ∪B
  std::size_t count = 0;
};
/// Orbits of the complements of the given structures under graph_automorphisms(spec).
std::vector<SymmetryClass> complement_symmetry_classes(const RobustnessSpec& spec,
                                                       const std::vector<RobustnessStructure>& structures);

/// |Y_R| + |X_R \ Y_R| * |X_{[n]\R}|, Y_R = {x_R : (R, x_R) ∈ spec}.
std::uint64_t structure_size_bound(const RobustnessSpec& spec, NodeSet nodes);

/// Every block is a product S_1 x ... x S_n and the blocks' projections cover every axis.
bool check_product_structure(const RobustnessStructure& structure, const StateSpace& space);

/// Maximal 1-robustness structures of X_1 x X_2 built from the product
/// characterization: pairs of set partitions with m parts each, matched by a
/// bijection. States are indexed in the space {2, d1, d2}.
std::vector<RobustnessStructure> two_input_maximal_structures(int d1, int d2);

/// Every block connected in G_{R_s} for all s <= n - 2k + 1. Binary inputs only (NotBinary).
bool smallk_connectivity_check(const RobustnessStructure& structure, const StateSpace& space, int k);

/// Largest S ⊆ {0..d-1}^n with pairwise Hamming distance >= n - k + 1.
/// Requires d^n <= 2^20 (StateSpaceTooLarge).
std::uint64_t max_singleton_code_size(int n, int k, int d);

}  // namespace knockout

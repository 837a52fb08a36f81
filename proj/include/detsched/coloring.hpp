#pragma once

#include <cstddef>
#include <vector>

#include "detsched/conflict.hpp"
#include "detsched/partition.hpp"
#include "detsched/schedule.hpp"

namespace detsched {

inline constexpr std::size_t kDefaultExactColoringCap = 64;
inline constexpr std::size_t kDefaultWeightedColoringCap = 20;

// Ids sorted by degree descending, ties by ascending id.
std::vector<TxId> descending_degree_order(const ConflictGraph& g);

// First-fit: each vertex, in the given order, takes the smallest color not
// used by an already colored neighbor. Throws ValidationError when order is
// not a permutation of the vertex ids.
Coloring greedy_coloring(const ConflictGraph& g, const std::vector<TxId>& order);

// Size of a clique found greedily; a lower bound on the chromatic number.
std::size_t greedy_clique_size(const ConflictGraph& g);

// Branch and bound over vertices in descending-degree order, colors
// ascending, bounded below by a greedy clique. Returns a coloring with
// exactly chi(g) colors. Throws CapacityError when g.size() > cap.
Coloring exact_min_coloring(const ConflictGraph& g, std::size_t cap = kDefaultExactColoringCap);

// Sum over color classes of the longest member length.
std::uint64_t coloring_weight(const Coloring& c, const std::vector<Length>& lengths);

// Legal coloring minimizing coloring_weight. Among optima, returns the one
// whose color vector read in descending-degree order is lexicographically
// smallest. Throws CapacityError when g.size() > cap.
Coloring exact_min_weighted_coloring(const ConflictGraph& g, const std::vector<Length>& lengths,
                                     std::size_t cap = kDefaultWeightedColoringCap);

// Level-by-level sweep from the sources: a vertex ends with the color of the
// deepest level that reaches it, i.e. its depth in vertices.
Coloring convert_to_coloring(const GraphSchedule& s);

// As above, first checking that s is valid for g (ValidationError otherwise)
// and that the resulting coloring is legal (InvariantError otherwise).
Coloring convert_to_coloring(const GraphSchedule& s, const ConflictGraph& g);

}  // namespace detsched

#pragma once

#include <string>
#include <vector>

#include "detsched/model.hpp"

namespace detsched {

class ConflictGraph;

// An ordered partition of a block's ids into sets. Each set is kept sorted.
using Partition = std::vector<std::vector<TxId>>;

// colors[id] in [1, k]; every color in [1, k] is used at least once.
struct Coloring {
    std::vector<int> colors;
    int k = 0;

    bool operator==(const Coloring&) const = default;
};

// Throws ValidationError when colors are outside [1, k] or some color is unused.
Coloring make_coloring(std::vector<int> colors);

bool is_legal_coloring(const Coloring& c, const ConflictGraph& g);

// Set i holds the vertices of color i + 1.
Partition partition_from_coloring(const Coloring& c);

// Inverse of partition_from_coloring; the partition must cover [0, n) exactly once.
Coloring coloring_from_partition(const Partition& p, std::size_t n);

// Throws ValidationError unless p covers [0, n) exactly once with non-empty
// sets, each independent in g. The message names an offending pair.
void require_legal_partition(const Partition& p, const ConflictGraph& g);

// "id color" per line, sorted by id.
std::string dump_coloring(const Coloring& c);
// One line per set, ids separated by spaces.
std::string dump_levels(const Partition& p);

}  // namespace detsched

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "detsched/model.hpp"

namespace detsched {

// Undirected conflict graph over transaction ids [0, n). Adjacency lists are
// sorted by id so every downstream iteration order is deterministic.
class ConflictGraph {
public:
    ConflictGraph() = default;
    explicit ConflictGraph(std::size_t n);

    // Throws ValidationError on self-loops or out-of-range ids. Duplicate
    // pairs (in either orientation) collapse to one edge.
    static ConflictGraph from_edges(std::size_t n, const std::vector<std::pair<TxId, TxId>>& edges);

    std::size_t size() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    bool has_edge(TxId u, TxId v) const;
    const std::vector<TxId>& neighbors(TxId v) const { return adjacency_.at(v); }
    std::size_t degree(TxId v) const { return adjacency_.at(v).size(); }

    // Canonical edge list: (i, j) with i < j, sorted lexicographically.
    std::vector<std::pair<TxId, TxId>> edges() const;

    // True iff no two members are adjacent.
    bool is_independent(const std::vector<TxId>& members) const;

    bool operator==(const ConflictGraph& other) const { return adjacency_ == other.adjacency_; }

private:
    void add_edge_unchecked(TxId u, TxId v);
    void finalize();

    std::vector<std::vector<TxId>> adjacency_;
    // Row-major bit matrix; only kept for graphs small enough to afford it.
    std::vector<std::uint64_t> matrix_;
    std::size_t words_per_row_ = 0;
    std::size_t edge_count_ = 0;
};

// RW, WR or WW intersection. Throws ValidationError when both share an id.
bool conflicts(const Transaction& a, const Transaction& b);

// Throws ValidationError for malformed blocks (duplicate ids etc).
ConflictGraph build_conflict_graph(const Block& block);

// One "i j" line per edge, i < j, sorted.
std::string dump_edges(const ConflictGraph& g);

}  // namespace detsched

#pragma once

// Graph schedules (DAGs over a block's ids), batch schedules, their latency,
// and the synthesis routines that turn partitions into schedules.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "detsched/conflict.hpp"
#include "detsched/model.hpp"
#include "detsched/partition.hpp"

namespace detsched {

// A directed acyclic dependency graph: edge (u, v) means u runs before v.
// Acyclicity is checked on construction.
class GraphSchedule {
public:
    GraphSchedule() = default;

    // Throws ValidationError on out-of-range ids, self-loops or cycles.
    GraphSchedule(std::size_t n, std::vector<std::pair<TxId, TxId>> edges);

    std::size_t size() const noexcept { return successors_.size(); }
    // Sorted, unique.
    const std::vector<std::pair<TxId, TxId>>& edges() const noexcept { return edges_; }
    const std::vector<TxId>& successors(TxId v) const { return successors_.at(v); }
    const std::vector<TxId>& predecessors(TxId v) const { return predecessors_.at(v); }
    // Kahn's algorithm, smallest ready id first.
    const std::vector<TxId>& topological_order() const noexcept { return topo_; }

    bool operator==(const GraphSchedule& o) const { return size() == o.size() && edges_ == o.edges_; }

private:
    std::vector<std::pair<TxId, TxId>> edges_;
    std::vector<std::vector<TxId>> successors_;
    std::vector<std::vector<TxId>> predecessors_;
    std::vector<TxId> topo_;
};

// Ordered batches; batches partition the ids and each is conflict-free.
struct BatchSchedule {
    Partition batches;

    std::size_t size() const;
    bool operator==(const BatchSchedule&) const = default;
};

struct LatencyReport {
    std::uint64_t block_latency = 0;
    std::vector<std::uint64_t> per_tx_finish;  // indexed by id
    std::uint64_t finish_sum = 0;
    std::uint64_t p95_latency = 0;  // nearest-rank 95th percentile of finish times

    double mean_latency() const {
        return per_tx_finish.empty() ? 0.0
                                     : static_cast<double>(finish_sum) / static_cast<double>(per_tx_finish.size());
    }
};

using Bitset = boost::dynamic_bitset<std::uint64_t>;

// reach[v] has bit u set iff there is a non-empty directed path v ~> u.
std::vector<Bitset> reachability(const GraphSchedule& s);

// Every conflicting pair is connected by a directed path in one direction.
// Throws ValidationError when the vertex counts differ.
bool is_valid_schedule(const GraphSchedule& s, const ConflictGraph& g);
void require_valid_schedule(const GraphSchedule& s, const ConflictGraph& g);

// Maximum vertex-weighted path length. lengths is indexed by id.
std::uint64_t latency(const GraphSchedule& s, const std::vector<Length>& lengths);

// Finish time of every vertex when each starts as soon as all predecessors finish.
std::vector<std::uint64_t> finish_times(const GraphSchedule& s, const std::vector<Length>& lengths);

LatencyReport latency_stats(const GraphSchedule& s, const std::vector<Length>& lengths);

// Levels are processed in order; for each level, earlier levels are visited
// nearest-first and a conflict edge u -> v is added only when no path u ~> v
// exists yet. Throws ValidationError (naming a pair) on an illegal partition.
GraphSchedule level_schedule(const Partition& levels, const ConflictGraph& g);

// Every conflict edge directed from the earlier transaction in block list
// order to the later one. No transitive pruning.
GraphSchedule total_order_schedule(const Block& block, const ConflictGraph& g);

// Throws ValidationError unless b is a legal batch sequence for g.
void require_legal_batches(const BatchSchedule& b, const ConflictGraph& g);

// Complete bipartite edges between consecutive batches.
GraphSchedule batch_to_graph(const BatchSchedule& b);

// Sum over batches of the longest member. Throws ValidationError on an empty batch.
std::uint64_t batch_latency(const BatchSchedule& b, const std::vector<Length>& lengths);

// New position i holds old set perm[i] (1-based permutation of [1, k]).
Partition reorder_partition(const Partition& p, const std::vector<int>& perm);

// Color classes in ascending color index.
Partition ascending_color_order(const Coloring& c);
// Color classes by descending size; ties by smallest member id.
Partition size_descending_color_order(const Coloring& c);

// Header "n m" (vertices, edges), then one "u v" line per edge, sorted.
std::string dump_schedule(const GraphSchedule& s);

}  // namespace detsched

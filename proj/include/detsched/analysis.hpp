#pragma once

// Optimal-latency oracles, the graph -> homogeneous block transform, the
// concurrency-level bound, the conflict-chain vulnerability estimator and the
// heterogeneous counterexample search.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detsched/conflict.hpp"
#include "detsched/model.hpp"
#include "detsched/partition.hpp"
#include "detsched/schedule.hpp"

namespace detsched {

inline constexpr std::size_t kDefaultOracleCap = 10;
inline constexpr std::size_t kDefaultOrientationEdgeCap = 20;

struct OracleResult {
    Partition levels;
    GraphSchedule schedule;
    std::uint64_t optimal_latency = 0;
};

// Exhaustive search over ordered legal partitions, each turned into a level
// schedule. Levels are encoded as id bitmasks; the result is the optimum whose
// tuple of level masks is lexicographically smallest among partitions in which
// consecutive levels share at least one conflict edge. Merging two unlinked
// consecutive levels never changes the latency, so that restriction loses no
// optimum. Throws CapacityError above cap.
OracleResult optimal_schedule_oracle(const Block& block, std::size_t cap = kDefaultOracleCap);

// Independent check for the oracle above: every acyclic orientation of the
// conflict graph, converted to a coloring and level-scheduled. Throws
// CapacityError when the graph has more than edge_cap edges.
std::uint64_t orientation_oracle(const Block& block, std::size_t edge_cap = kDefaultOrientationEdgeCap);

// Latency of level_schedule(levels, g) without materializing it: the
// longest vertex-weighted path when every conflict edge points from the lower
// level to the higher one.
std::uint64_t ordered_partition_latency(const Partition& levels, const ConflictGraph& g,
                                        const std::vector<Length>& lengths);

// One SLEEP_ONLY transaction of length c per vertex; each edge gets its own
// key written by both endpoints.
Block transform_graph_to_block(const ConflictGraph& g, Length c);

// For positions i < j in order with an edge between them, l[j] = max(l[j], l[i] + 1).
// Returns max l: the edge count of a path increasing in the order.
std::size_t est_longest_path(const ConflictGraph& g, const std::vector<TxId>& order);
std::size_t est_longest_path(const ConflictGraph& g);

// Greedy coloring in descending-degree order; 0 for the empty graph.
std::size_t est_chromatic(const ConflictGraph& g);

ConflictGraph gnp_graph(std::size_t n, double p, std::uint64_t seed);

struct RatioSample {
    std::size_t n = 0;
    double p = 0;
    std::size_t est_longest_path_vertices = 0;  // l + 1
    std::size_t est_chromatic = 0;
    double ratio = 0;
};

RatioSample ratio_sample(const ConflictGraph& g, double p, const std::vector<TxId>& order);

struct RatioCell {
    std::size_t n = 0;
    double p = 0;
    std::size_t samples = 0;
    double mean_ratio = 0;
    double min_ratio = 0;
    double max_ratio = 0;
    std::uint64_t seed = 0;
};

struct StudyOptions {
    std::size_t threads = 1;
    // Feed est_longest_path a seeded random order instead of ascending id.
    bool random_order = false;
};

// One cell per (n, p), n-major. Sample s of cell (n, p_i) uses seed
// derive_seed(seed, {n, i, s}); cells are merged in a fixed order so the
// output does not depend on the thread count. Throws ValidationError when
// samples == 0 or a p lies outside [0, 1].
std::vector<RatioCell> vulnerability_study(const std::vector<std::size_t>& ns, const std::vector<double>& ps,
                                           std::size_t samples, std::uint64_t seed, StudyOptions options = {});

// Header n,p,samples,mean_ratio,min_ratio,max_ratio,seed then one row per cell.
std::string ratio_csv(const std::vector<RatioCell>& cells);

// ceil((ch - (M - 1)) / (M - 1)). Throws ValidationError when M < 2 or ch < M.
std::uint64_t alpha_bound(std::uint64_t ch, std::uint64_t M);

// Every partition of the vertices into exactly k independent sets, each in
// ascending order of smallest member, sets listed in lexicographic order of
// their restricted-growth encoding.
std::vector<Partition> all_colorings_with(const ConflictGraph& g, std::size_t k);

struct Witness {
    Block block;
    std::string detail;
};

// Phenomena, indexed 0..2:
//  a: two minimal colorings (canonical color order) whose level schedules
//     have different latencies;
//  b: a minimal coloring where some color permutation changes the latency,
//     or whose best permutation still exceeds the optimum;
//  c: the minimal weighted coloring's level schedule exceeds the optimum
//     while some minimal coloring, in some color order, reaches it.
struct CounterexampleReport {
    std::size_t trials = 0;
    std::array<std::size_t, 3> counts{};
    std::array<std::optional<Witness>, 3> witnesses;
};

// Random blocks of 3..n_max transactions over G(n, p) conflict graphs,
// lengths drawn from {1, 10, 100, 1000} (all 1 when homogeneous).
// Throws CapacityError when n_max exceeds the oracle cap.
CounterexampleReport hetero_counterexample_search(std::size_t n_max, std::size_t trials, std::uint64_t seed,
                                                  bool homogeneous = false);

std::string format_report(const CounterexampleReport& report);

struct ReorderWitness {
    Block block;
    Partition levels;
    std::vector<int> perm;  // 1-based, as for reorder_partition
    std::uint64_t before = 0;
    std::uint64_t after = 0;
};

// Searches random homogeneous blocks for a legal partition with more than
// chi colors and a permutation of it that changes the level-schedule latency.
std::optional<ReorderWitness> reorder_witness_search(std::size_t n_max, std::size_t trials, std::uint64_t seed);

// All connected graphs on 1..max_n vertices up to isomorphism. Throws
// CapacityError when max_n > 6.
std::vector<ConflictGraph> connected_graph_catalog(std::size_t max_n);

}  // namespace detsched

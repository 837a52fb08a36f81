#include <gtest/gtest.h>

#include "detsched/analysis.hpp"
#include "detsched/coloring.hpp"
#include "detsched/errors.hpp"
#include "support/oracles.hpp"

using namespace detsched;

namespace {

ConflictGraph path(std::size_t n) {
    std::vector<std::pair<TxId, TxId>> e;
    for (TxId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return ConflictGraph::from_edges(n, e);
}

ConflictGraph cycle(std::size_t n) {
    std::vector<std::pair<TxId, TxId>> e;
    for (TxId i = 0; i < n; ++i) e.emplace_back(i, static_cast<TxId>((i + 1) % n));
    return ConflictGraph::from_edges(n, e);
}

ConflictGraph complete(std::size_t n) { return gnp_graph(n, 1.0, 0); }

}  // namespace

TEST(DescendingDegree, Examples) {
    auto star = ConflictGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EXPECT_EQ(descending_degree_order(star), (std::vector<TxId>{0, 1, 2, 3, 4}));
    EXPECT_EQ(descending_degree_order(ConflictGraph(3)), (std::vector<TxId>{0, 1, 2}));
    EXPECT_EQ(descending_degree_order(path(4)), (std::vector<TxId>{1, 2, 0, 3}));
}

TEST(GreedyColoring, Examples) {
    EXPECT_EQ(greedy_coloring(ConflictGraph(4), {3, 1, 0, 2}).k, 1);
    EXPECT_EQ(greedy_coloring(complete(3), {2, 0, 1}).k, 3);
    const auto p6 = path(6);
    EXPECT_EQ(greedy_coloring(p6, descending_degree_order(p6)).k, oracle::chromatic_number(p6));
}

TEST(GreedyColoring, RejectsNonPermutation) {
    EXPECT_THROW(greedy_coloring(path(3), {0, 1}), ValidationError);
    EXPECT_THROW(greedy_coloring(path(3), {0, 1, 1}), ValidationError);
    EXPECT_THROW(greedy_coloring(path(3), {0, 1, 3}), ValidationError);
}

TEST(GreedyColoring, FirstFitByHand) {
    // Order 0,3,1,2 on the path 0-1-2-3: 0->1, 3->1, 1->2, 2->3.
    auto c = greedy_coloring(path(4), {0, 3, 1, 2});
    EXPECT_EQ(c.colors, (std::vector<int>{1, 2, 3, 1}));
}

TEST(ExactColoring, Examples) {
    EXPECT_EQ(exact_min_coloring(cycle(5)).k, oracle::chromatic_number(cycle(5)));
    EXPECT_EQ(exact_min_coloring(cycle(5)).k, 3);
    for (std::size_t n = 2; n < 9; ++n) EXPECT_EQ(exact_min_coloring(path(n)).k, 2);
    EXPECT_EQ(exact_min_coloring(complete(4)).k, 4);
    EXPECT_EQ(exact_min_coloring(ConflictGraph(0)).k, 0);
}

TEST(ExactColoring, MatchesBruteForceAndBeatsGreedy) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const std::size_t n = 3 + seed % 6;
        const double p = 0.2 + 0.1 * static_cast<double>(seed % 6);
        const ConflictGraph g = gnp_graph(n, p, seed);
        const Coloring c = exact_min_coloring(g);
        EXPECT_TRUE(is_legal_coloring(c, g));
        EXPECT_EQ(c.k, oracle::chromatic_number(g)) << "seed " << seed;
        EXPECT_LE(c.k, greedy_coloring(g, descending_degree_order(g)).k);
        std::vector<TxId> rev(n);
        for (std::size_t i = 0; i < n; ++i) rev[i] = static_cast<TxId>(n - 1 - i);
        EXPECT_LE(c.k, greedy_coloring(g, rev).k);
        EXPECT_EQ(exact_min_coloring(g), c);
    }
}

TEST(ExactColoring, CapacityError) {
    EXPECT_THROW(exact_min_coloring(path(65)), CapacityError);
    EXPECT_NO_THROW(exact_min_coloring(path(65), 100));
}

TEST(ExactColoring, DenseMediumGraph) {
    const ConflictGraph g = gnp_graph(40, 0.5, 11);
    const Coloring c = exact_min_coloring(g);
    EXPECT_TRUE(is_legal_coloring(c, g));
    EXPECT_LE(static_cast<std::size_t>(c.k), est_chromatic(g));
    EXPECT_GE(static_cast<std::size_t>(c.k), greedy_clique_size(g));
}

TEST(WeightedColoring, Examples) {
    const std::vector<Length> l3{5, 1, 2};
    auto e = exact_min_weighted_coloring(ConflictGraph(3), l3);
    EXPECT_EQ(e.k, 1);
    EXPECT_EQ(coloring_weight(e, l3), 5u);

    const std::vector<Length> l2{5, 1};
    auto k2 = exact_min_weighted_coloring(complete(2), l2);
    EXPECT_EQ(k2.k, 2);
    EXPECT_EQ(coloring_weight(k2, l2), 6u);
}

TEST(WeightedColoring, MatchesPartitionOracle) {
    const std::vector<Length> choices{1, 10, 100, 1000};
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const ConflictGraph g = gnp_graph(8, 0.2 + 0.05 * static_cast<double>(seed % 8), seed);
        Rng rng(seed + 1000);
        std::vector<Length> len(8);
        for (auto& l : len) l = choices[rng.uniform(0, 3)];
        const Coloring c = exact_min_weighted_coloring(g, len);
        EXPECT_TRUE(is_legal_coloring(c, g));
        EXPECT_EQ(coloring_weight(c, len), oracle::min_weighted_coloring(g, len)) << "seed " << seed;
        EXPECT_EQ(exact_min_weighted_coloring(g, len), c);
    }
}

TEST(WeightedColoring, CapacityError) {
    EXPECT_THROW(exact_min_weighted_coloring(path(21), std::vector<Length>(21, 1)), CapacityError);
}

TEST(ConvertToColoring, Examples) {
    const GraphSchedule chain(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(convert_to_coloring(chain).colors, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(convert_to_coloring(GraphSchedule(3, {})).colors, (std::vector<int>{1, 1, 1}));
    // a=0, b=1, c=2, d=3
    const GraphSchedule diamond(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    EXPECT_EQ(convert_to_coloring(diamond).colors, (std::vector<int>{1, 2, 2, 3}));
}

TEST(ConvertToColoring, DepthOfUnevenBranches) {
    // 0 -> 1 -> 2 -> 3 and 0 -> 3: vertex 3 sits at depth 4.
    const GraphSchedule s(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    EXPECT_EQ(convert_to_coloring(s).colors, (std::vector<int>{1, 2, 3, 4}));
}

TEST(ConvertToColoring, RejectsInvalidSchedule) {
    const ConflictGraph g = ConflictGraph::from_edges(2, {{0, 1}});
    EXPECT_THROW(convert_to_coloring(GraphSchedule(2, {}), g), ValidationError);
    EXPECT_THROW(GraphSchedule(2, {{0, 1}, {1, 0}}), ValidationError);
}

TEST(ConvertToColoring, LegalWithDepthColorsOnRandomSchedules) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Block b = oracle::random_block(seed, 3 + seed % 8);
        const ConflictGraph g = build_conflict_graph(b);
        const GraphSchedule s = oracle::random_valid_schedule(g, seed);
        const Coloring c = convert_to_coloring(s, g);
        EXPECT_TRUE(is_legal_coloring(c, g));
        // Unit lengths make latency the depth in vertices.
        EXPECT_EQ(static_cast<std::uint64_t>(c.k), oracle::longest_path_enum(s, std::vector<Length>(s.size(), 1)));
        EXPECT_EQ(convert_to_coloring(s), c);
    }
}

TEST(Partition, DumpsAndConversions) {
    Coloring c = make_coloring({2, 1, 2, 3});
    EXPECT_EQ(dump_coloring(c), "0 2\n1 1\n2 2\n3 3\n");
    Partition p = partition_from_coloring(c);
    EXPECT_EQ(p, (Partition{{1}, {0, 2}, {3}}));
    EXPECT_EQ(coloring_from_partition(p, 4), c);
    EXPECT_EQ(dump_levels(p), "1\n0 2\n3\n");
    EXPECT_THROW(make_coloring({1, 3}), ValidationError);
    EXPECT_THROW(make_coloring({0, 1}), ValidationError);
}

TEST(Partition, LegalityNamesThePair) {
    const ConflictGraph g = ConflictGraph::from_edges(3, {{0, 2}});
    try {
        require_legal_partition({{0, 2}, {1}}, g);
        FAIL();
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find('0'), std::string::npos);
        EXPECT_NE(what.find('2'), std::string::npos);
    }
    EXPECT_THROW(require_legal_partition({{0}, {1}}, g), ValidationError);
    EXPECT_THROW(require_legal_partition({{0}, {1, 1}, {2}}, g), ValidationError);
    EXPECT_NO_THROW(require_legal_partition({{0, 1}, {2}}, g));
}

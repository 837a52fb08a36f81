#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "detsched/coloring.hpp"
#include "detsched/errors.hpp"
#include "detsched/executor.hpp"
#include "detsched/workload.hpp"
#include "support/oracles.hpp"

using namespace detsched;
using namespace std::chrono_literals;

namespace {

Block writer_reader() {
    Block b;
    b.txs = {make_transaction(0, {}, {"x"}, 1, {ProgramKind::WriteConst, 1}),
             make_transaction(1, {"x"}, {"y"}, 1, {ProgramKind::SumAndAdd, 1})};
    return b;
}

GlobalState applied(const GlobalState& s, const ExecutionOutcome& o) {
    GlobalState out = s;
    out.apply(o.state_changes);
    return out;
}

GlobalState seeded_state(std::uint64_t seed) {
    GlobalState s;
    Rng rng(seed);
    for (int k = 0; k < 6; k += 2) s.entries["k" + std::to_string(k)] = static_cast<Value>(rng.uniform(0, 50));
    return s;
}

}  // namespace

TEST(Sequential, Examples) {
    const Block b = writer_reader();
    EXPECT_EQ(applied({}, execute_sequential(b, {0, 1}, {})).entries, (ValueMap{{"x", 1}, {"y", 2}}));
    EXPECT_EQ(applied({}, execute_sequential(b, {1, 0}, {})).entries, (ValueMap{{"x", 1}, {"y", 1}}));
    GlobalState s;
    s.entries = {{"q", 3}};
    const auto empty = execute_sequential(Block{}, {}, s);
    EXPECT_TRUE(empty.state_changes.empty());
    EXPECT_TRUE(empty.results.empty());
}

TEST(Sequential, RejectsNonPermutation) {
    EXPECT_THROW(execute_sequential(writer_reader(), {0}, {}), ValidationError);
    EXPECT_THROW(execute_sequential(writer_reader(), {0, 0}, {}), ValidationError);
}

TEST(GraphExecutor, WriterThenReader) {
    const Block b = writer_reader();
    for (int i = 0; i < 20; ++i) {
        ExecOptions o;
        o.max_jitter = 200us;
        o.jitter_seed = static_cast<std::uint64_t>(i);
        const auto out = execute_graph_schedule(b, GraphSchedule(2, {{0, 1}}), {}, o);
        EXPECT_EQ(applied({}, out).entries, (ValueMap{{"x", 1}, {"y", 2}}));
        EXPECT_EQ(compare_outcomes(execute_sequential(b, {0, 1}, {}), out), std::nullopt);
    }
}

TEST(GraphExecutor, IndependentWritesAllPresent) {
    Block b;
    for (TxId i = 0; i < 8; ++i) {
        b.txs.push_back(make_transaction(i, {}, {"w" + std::to_string(i)}, 1, {ProgramKind::WriteConst, 10 + i}));
    }
    const auto out = execute_graph_schedule(b, GraphSchedule(8, {}), {});
    EXPECT_EQ(out.results.size(), 8u);
    std::vector<TxId> seen = out.emission_order;
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(seen, (std::vector<TxId>{0, 1, 2, 3, 4, 5, 6, 7}));
    for (TxId i = 0; i < 8; ++i) EXPECT_EQ(out.state_changes.at("w" + std::to_string(i)), 10 + i);
}

TEST(GraphExecutor, ChainLevelScheduleMatchesEvensThenOdds) {
    const Block b = chain_block(6);
    const ConflictGraph g = build_conflict_graph(b);
    const GraphSchedule s = level_schedule({{0, 2, 4}, {1, 3, 5}}, g);
    GlobalState init;
    for (int i = 0; i <= 6; ++i) init.entries["x" + std::to_string(i)] = i * 3;
    const auto expected = execute_sequential(b, {0, 2, 4, 1, 3, 5}, init);
    ExecOptions o;
    o.max_jitter = 100us;
    const auto out = execute_graph_schedule(b, s, init, o);
    EXPECT_EQ(compare_outcomes(expected, out), std::nullopt);
}

TEST(GraphExecutor, RejectsInvalidSchedule) {
    EXPECT_THROW(execute_graph_schedule(writer_reader(), GraphSchedule(2, {}), {}), ValidationError);
    EXPECT_THROW(execute_graph_schedule(writer_reader(), GraphSchedule(3, {{0, 1}}), {}), ValidationError);
}

TEST(GraphExecutor, EquivalentToSequentialOnRandomBlocks) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Block b = oracle::random_block(seed, 4 + seed % 9);
        const ConflictGraph g = build_conflict_graph(b);
        const GraphSchedule s = oracle::random_valid_schedule(g, seed + 99);
        const GlobalState init = seeded_state(seed);
        ExecOptions o;
        o.max_jitter = 50us;
        o.jitter_seed = seed;
        const auto out = execute_graph_schedule(b, s, init, o);
        EXPECT_EQ(compare_outcomes(execute_sequential(b, s.topological_order(), init), out), std::nullopt)
            << "seed " << seed;
        EXPECT_EQ(out.results.size(), b.txs.size());
    }
}

TEST(GraphExecutor, BoundedPoolMatches) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Block b = oracle::random_block(seed, 12);
        const ConflictGraph g = build_conflict_graph(b);
        const GraphSchedule s = oracle::random_valid_schedule(g, seed);
        ExecOptions o;
        o.pool_size = 1 + seed % 3;
        o.max_jitter = 20us;
        o.jitter_seed = seed;
        const auto out = execute_graph_schedule(b, s, {}, o);
        EXPECT_EQ(compare_outcomes(execute_sequential(b, s.topological_order(), {}), out), std::nullopt)
            << "seed " << seed;
    }
}

TEST(GraphExecutor, ExecutionObjectLifecycle) {
    const Block b = chain_block(5);
    const GraphSchedule s = total_order_schedule(b, build_conflict_graph(b));
    GraphExecution ex(b, s, {});
    ex.start();
    std::vector<TxResult> got;
    while (ex.is_running()) {
        auto batch = ex.next_results();
        got.insert(got.end(), batch.begin(), batch.end());
    }
    auto rest = ex.next_results();
    got.insert(got.end(), rest.begin(), rest.end());
    ex.wait();
    EXPECT_EQ(got.size(), 5u);
    // Total order on a chain emits in id order.
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].tx_id, i);
    EXPECT_EQ(ex.state_changes(), execute_sequential(b, {0, 1, 2, 3, 4}, {}).state_changes);
}

TEST(GraphExecutor, UnstartedExecutionDestroysCleanly) {
    const Block b = chain_block(4);
    auto ex = std::make_unique<GraphExecution>(b, total_order_schedule(b, build_conflict_graph(b)), GlobalState{});
    ex.reset();
    SUCCEED();
}

TEST(BatchExecutor, ReaderSeesWriter) {
    const auto out = execute_batch_schedule(writer_reader(), BatchSchedule{{{0}, {1}}}, {});
    EXPECT_EQ(applied({}, out).entries, (ValueMap{{"x", 1}, {"y", 2}}));
}

TEST(BatchExecutor, SingleBatchMatchesEmptyGraph) {
    Block b;
    for (TxId i = 0; i < 6; ++i) {
        b.txs.push_back(make_transaction(i, {"r"}, {"w" + std::to_string(i)}, 1, {ProgramKind::SumAndAdd, i}));
    }
    GlobalState init;
    init.entries = {{"r", 5}};
    const auto batch = execute_batch_schedule(b, BatchSchedule{{{0, 1, 2, 3, 4, 5}}}, init);
    const auto graph = execute_graph_schedule(b, GraphSchedule(6, {}), init);
    EXPECT_EQ(compare_outcomes(graph, batch), std::nullopt);
}

TEST(BatchExecutor, RejectsIllegalBatches) {
    EXPECT_THROW(execute_batch_schedule(writer_reader(), BatchSchedule{{{0, 1}}}, {}), ValidationError);
    EXPECT_THROW(execute_batch_schedule(writer_reader(), BatchSchedule{{{0}}}, {}), ValidationError);
}

TEST(BatchExecutor, EquivalentToGraphForm) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Block b = oracle::random_block(seed, 10);
        const ConflictGraph g = build_conflict_graph(b);
        Rng rng(seed);
        std::vector<TxId> order(10);
        std::iota(order.begin(), order.end(), TxId{0});
        rng.shuffle(order);
        Partition p = ascending_color_order(greedy_coloring(g, order));
        rng.shuffle(p);
        const BatchSchedule bs{p};
        const GlobalState init = seeded_state(seed);
        ExecOptions o;
        o.max_jitter = 30us;
        o.jitter_seed = seed;
        const auto batch = execute_batch_schedule(b, bs, init, o);
        const auto graph = execute_graph_schedule(b, batch_to_graph(bs), init, o);
        EXPECT_EQ(compare_outcomes(graph, batch), std::nullopt) << "seed " << seed;
    }
}

TEST(Simulation, Examples) {
    Block two;
    two.txs = {make_transaction(0, {}, {"x"}, 5, {}), make_transaction(1, {}, {"x"}, 1, {})};
    EXPECT_EQ(simulate_execution(two, GraphSchedule(2, {{0, 1}}), {}).makespan, 6u);

    Block three;
    three.txs = {make_transaction(0, {}, {"a"}, 3, {}), make_transaction(1, {}, {"b"}, 9, {}),
                 make_transaction(2, {}, {"c"}, 4, {})};
    const auto sim = simulate_execution(three, GraphSchedule(3, {}), {});
    EXPECT_EQ(sim.makespan, 9u);
    for (const auto& r : sim.outcome.results) {
        ASSERT_TRUE(r.finish_time);
        EXPECT_EQ(*r.finish_time, three.txs[r.tx_id].length);
    }
}

TEST(Simulation, MakespanEqualsLatencyAndOutcomeMatches) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Block b = oracle::random_block(seed, 10);
        const ConflictGraph g = build_conflict_graph(b);
        const GraphSchedule s = oracle::random_valid_schedule(g, seed);
        const auto sim = simulate_execution(b, s, seeded_state(seed));
        EXPECT_EQ(sim.makespan, oracle::longest_path_enum(s, lengths_of(b))) << "seed " << seed;
        EXPECT_EQ(compare_outcomes(execute_sequential(b, s.topological_order(), seeded_state(seed)), sim.outcome),
                  std::nullopt);
        const auto finish = finish_times(s, lengths_of(b));
        for (const auto& r : sim.outcome.results) EXPECT_EQ(*r.finish_time, finish[r.tx_id]);
    }
}

TEST(Stress, ChainLevelScheduleIsDeterministic) {
    const Block b = chain_block(8);
    const GraphSchedule s = level_schedule({{0, 2, 4, 6}, {1, 3, 5, 7}}, build_conflict_graph(b));
    ExecOptions o;
    o.max_jitter = 50us;
    o.jitter_seed = 5;
    const auto r = stress_determinism(b, s, {}, 100, o);
    EXPECT_TRUE(r.deterministic) << r.diff;
    EXPECT_EQ(r.trials, 100u);
}

TEST(Stress, SingleTransaction) {
    Block b;
    b.txs = {make_transaction(0, {"a"}, {"a"}, 1, {ProgramKind::SumAndAdd, 2})};
    EXPECT_TRUE(stress_determinism(b, GraphSchedule(1, {}), {}, 2, {}).deterministic);
    EXPECT_THROW(stress_determinism(b, GraphSchedule(1, {}), {}, 1, {}), ValidationError);
}

TEST(Stress, EarlyReleaseIsCaught) {
    const Block b = chain_block(6);
    const GraphSchedule s = total_order_schedule(b, build_conflict_graph(b));
    ExecOptions o;
    o.max_jitter = 500us;
    o.jitter_seed = 11;
    o.release_before_writeback = true;
    const auto r = stress_determinism(b, s, {}, 30, o);
    EXPECT_FALSE(r.deterministic);
    EXPECT_FALSE(r.diff.empty());
}

TEST(Stress, EarlyBatchReleaseIsCaught) {
    const Block b = chain_block(6);
    const BatchSchedule bs{{{0}, {1}, {2}, {3}, {4}, {5}}};
    const auto expected = execute_sequential(b, {0, 1, 2, 3, 4, 5}, {});
    bool caught = false;
    for (std::uint64_t t = 0; t < 30 && !caught; ++t) {
        ExecOptions o;
        o.max_jitter = 500us;
        o.jitter_seed = t;
        o.release_before_writeback = true;
        caught = compare_outcomes(expected, execute_batch_schedule(b, bs, {}, o)).has_value();
    }
    EXPECT_TRUE(caught);
}

TEST(Trace, ConflictingIntervalsAreDisjoint) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Block b = oracle::random_block(seed, 10);
        const ConflictGraph g = build_conflict_graph(b);
        ExecOptions o;
        o.trace = true;
        o.max_jitter = 50us;
        o.jitter_seed = seed;
        const auto out = execute_graph_schedule(b, oracle::random_valid_schedule(g, seed), {}, o);
        ASSERT_EQ(out.trace.size(), 10u);
        for (const auto& t : out.trace) EXPECT_LE(t.start_ns, t.end_ns);
        EXPECT_TRUE(conflicting_intervals_disjoint(out.trace, g));
    }
}

TEST(Trace, AuditDetectsOverlap) {
    const auto g = ConflictGraph::from_edges(2, {{0, 1}});
    EXPECT_FALSE(conflicting_intervals_disjoint({{0, 0, 10}, {1, 5, 15}}, g));
    EXPECT_TRUE(conflicting_intervals_disjoint({{0, 0, 10}, {1, 10, 15}}, g));
    EXPECT_TRUE(conflicting_intervals_disjoint({{0, 0, 10}, {1, 5, 15}}, ConflictGraph(2)));
    EXPECT_EQ(dump_trace({{1, 5, 15}, {0, 0, 10}}), "0 0 10\n1 5 15\n");
}

TEST(CompareOutcomes, ReportsDifferences) {
    const Block b = writer_reader();
    const auto a = execute_sequential(b, {0, 1}, {});
    const auto c = execute_sequential(b, {1, 0}, {});
    EXPECT_EQ(compare_outcomes(a, a), std::nullopt);
    EXPECT_TRUE(compare_outcomes(a, c).has_value());
}

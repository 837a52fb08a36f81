#pragma once

// Executors for graph and batch schedules.
//
// GraphExecution runs one logical worker per transaction. Every schedule edge
// owns a single-shot signal that starts locked; a worker waits for all of its
// incoming signals, serves its read set from the store, runs its program,
// stores its writes, emits its result and only then releases its outgoing
// signals. Validity of the schedule is what makes this serializable, so it is
// checked before any worker is launched.
//
// Result emission order is not part of the deterministic contract. Outcomes
// are compared as a set of results keyed by tx id plus the final state.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "detsched/conflict.hpp"
#include "detsched/model.hpp"
#include "detsched/schedule.hpp"

namespace detsched {

struct ExecOptions {
    // Each worker sleeps a random duration in [0, max_jitter] before serving
    // its reads and again before storing its writes.
    std::chrono::nanoseconds max_jitter{0};
    std::uint64_t jitter_seed = 0;
    // 0 runs one worker thread per transaction; otherwise a bounded pool that
    // only picks up transactions whose signals have all been released.
    std::size_t pool_size = 0;
    // Fault injection for negative tests: release outgoing signals (or, for
    // batches, the transaction's share of batch completion) before the
    // write-back instead of after it.
    bool release_before_writeback = false;
    bool trace = false;
};

struct TraceInterval {
    TxId id = 0;
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
};

struct ExecutionOutcome {
    std::vector<TxResult> results;  // emission order
    ValueMap state_changes;
    std::vector<TxId> emission_order;
    std::vector<TraceInterval> trace;  // only with ExecOptions::trace
};

// The runtime half of a block runner: created initialized but idle, started
// once, then drained until it stops running.
class Execution {
public:
    virtual ~Execution() = default;

    virtual void start() = 0;
    virtual bool is_running() const = 0;
    // Results emitted since the previous call. Blocks briefly while running
    // and nothing new is available.
    virtual std::vector<TxResult> next_results() = 0;
    // Only meaningful once is_running() returned false.
    virtual ValueMap state_changes() const = 0;
    virtual std::vector<TraceInterval> trace() const = 0;
    // Blocks until every worker finished; rethrows a worker failure.
    virtual void wait() = 0;
};

namespace detail {
class SharedStore;
class EmitLog;
}  // namespace detail

class GraphExecution final : public Execution {
public:
    // Throws ValidationError when the schedule does not match the block or is
    // not valid for the block's conflict graph.
    GraphExecution(const Block& block, const GraphSchedule& schedule, const GlobalState& state,
                   ExecOptions options = {});
    ~GraphExecution() override;

    GraphExecution(const GraphExecution&) = delete;
    GraphExecution& operator=(const GraphExecution&) = delete;

    void start() override;
    bool is_running() const override;
    std::vector<TxResult> next_results() override;
    ValueMap state_changes() const override;
    std::vector<TraceInterval> trace() const override;

    void wait() override;

private:
    class Signal;
    void run_worker(TxId id);
    void run_pool_worker();
    void finish_tx(TxId id);

    Block block_;
    std::vector<const Transaction*> by_id_;
    GraphSchedule schedule_;
    ExecOptions options_;
    std::unique_ptr<detail::SharedStore> store_;
    std::unique_ptr<detail::EmitLog> log_;
    std::unique_ptr<Signal[]> signals_;  // one per schedule edge
    std::vector<std::vector<std::size_t>> incoming_;
    std::vector<std::vector<std::size_t>> outgoing_;
    std::unique_ptr<Signal> start_gate_;
    std::atomic<bool> cancelled_{false};
    bool started_ = false;

    // bounded-pool mode
    std::unique_ptr<std::atomic<std::size_t>[]> pending_;
    std::mutex ready_mutex_;
    std::condition_variable ready_cv_;
    std::vector<TxId> ready_;
    std::size_t dispatched_ = 0;

    std::vector<std::thread> workers_;
};

class BatchExecution final : public Execution {
public:
    // Throws ValidationError when the batches are not a legal partition.
    BatchExecution(const Block& block, const BatchSchedule& batches, const GlobalState& state,
                   ExecOptions options = {});
    ~BatchExecution() override;

    BatchExecution(const BatchExecution&) = delete;
    BatchExecution& operator=(const BatchExecution&) = delete;

    void start() override;
    bool is_running() const override;
    std::vector<TxResult> next_results() override;
    ValueMap state_changes() const override;
    std::vector<TraceInterval> trace() const override;
    void wait() override;

private:
    void run_batches();

    Block block_;
    std::vector<const Transaction*> by_id_;
    BatchSchedule batches_;
    ExecOptions options_;
    std::unique_ptr<detail::SharedStore> store_;
    std::unique_ptr<detail::EmitLog> log_;
    std::thread coordinator_;
};

// One transaction after another in the given order, against a private copy
// of state. The reference for every equivalence check.
ExecutionOutcome execute_sequential(const Block& block, const std::vector<TxId>& order, const GlobalState& state);

ExecutionOutcome execute_graph_schedule(const Block& block, const GraphSchedule& schedule,
                                        const GlobalState& state, ExecOptions options = {});

ExecutionOutcome execute_batch_schedule(const Block& block, const BatchSchedule& batches,
                                        const GlobalState& state, ExecOptions options = {});

struct SimulationResult {
    ExecutionOutcome outcome;  // results carry finish_time
    std::uint64_t makespan = 0;
};

// Discrete-event simulation with unbounded processors: a transaction starts
// when its last predecessor finishes and runs for exactly its length.
SimulationResult simulate_execution(const Block& block, const GraphSchedule& schedule, const GlobalState& state);

// nullopt when equal; otherwise a description of the first difference.
// Results are matched by tx id; emission order is ignored.
std::optional<std::string> compare_outcomes(const ExecutionOutcome& expected, const ExecutionOutcome& actual);

struct StressReport {
    bool deterministic = true;
    std::size_t trials = 0;
    std::string diff;  // first mismatch, empty when deterministic
};

// Runs the graph executor `trials` times with per-trial jitter seeds and
// compares every run against execute_sequential over the schedule's
// topological order. Throws ValidationError when trials < 2.
StressReport stress_determinism(const Block& block, const GraphSchedule& schedule, const GlobalState& state,
                                std::size_t trials, ExecOptions options);

// Overlap audit: true when every conflicting pair ran in disjoint intervals.
bool conflicting_intervals_disjoint(const std::vector<TraceInterval>& trace, const ConflictGraph& g);

std::string dump_trace(const std::vector<TraceInterval>& trace);

}  // namespace detsched

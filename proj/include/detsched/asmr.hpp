#pragma once

// Block runners and the replicated main loop.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "detsched/conflict.hpp"
#include "detsched/executor.hpp"
#include "detsched/model.hpp"
#include "detsched/partition.hpp"
#include "detsched/schedule.hpp"

namespace detsched {

using Schedule = std::variant<GraphSchedule, BatchSchedule>;

enum class ColoringMode { Greedy, Exact, WeightedExact };
enum class ColorOrder { Ascending, SizeDescending };

const char* to_string(ColoringMode m);
const char* to_string(ColorOrder o);
ColoringMode coloring_mode_from_string(const std::string& s);
ColorOrder color_order_from_string(const std::string& s);

struct ScheduleMetadata {
    std::string runner;
    std::string coloring;  // mode actually used; empty for the order runner
    bool fell_back = false;
    std::string note;  // why a fallback or substitution happened
    Partition levels;  // empty for the order runner
};

struct ScheduledBlock {
    Schedule schedule;
    ScheduleMetadata meta;
};

using PartitionFn = std::function<Partition(const Block&, const ConflictGraph&)>;

struct RunnerOptions {
    // Unset: greedy for level-greedy, exact for min-coloring and batch.
    std::optional<ColoringMode> coloring;
    ColorOrder order = ColorOrder::SizeDescending;
    std::size_t exact_cap = 64;
    std::size_t weighted_cap = 20;
    // When set, an epsilon-homogeneous block is colored as if homogeneous
    // (weighted-exact degrades to exact).
    std::optional<Length> treat_epsilon_homogeneous;
    // Replaces coloring + ordering entirely; the result must be legal.
    PartitionFn partition;
    ExecOptions exec;
};

class BlockRunner {
public:
    virtual ~BlockRunner() = default;

    virtual std::string name() const = 0;
    // Pure and deterministic in (block, constraints).
    virtual ScheduledBlock make_schedule(const Block& block, const ConflictGraph& g) const = 0;
    virtual bool validate_schedule(const Block& block, const ConflictGraph& g, const Schedule& s) const;
    // The returned execution is initialized but idle; its start, is_running,
    // next_results and state_changes complete the runner's interface.
    virtual std::unique_ptr<Execution> init_execution(const Block& block, const Schedule& s,
                                                      const GlobalState& state,
                                                      std::optional<ExecOptions> exec = std::nullopt) const;

protected:
    explicit BlockRunner(RunnerOptions options) : options_(std::move(options)) {}
    RunnerOptions options_;
};

// Names: "order", "level-greedy", "min-coloring", "batch".
std::unique_ptr<BlockRunner> make_runner(const std::string& name, RunnerOptions options = {});
const std::vector<std::string>& runner_names();

// The ordered partition a coloring runner would use. Records fallbacks in meta.
Partition choose_partition(const Block& block, const ConflictGraph& g, const RunnerOptions& options,
                           ColoringMode mode, ScheduleMetadata& meta);

// Graph view of either schedule kind.
GraphSchedule as_graph(const Schedule& s);

struct BlockOutcome {
    bool valid = true;
    std::vector<TxResult> results;  // emission order
    ValueMap state_changes;
    std::optional<ScheduledBlock> schedule;
    std::vector<TraceInterval> trace;  // with ExecOptions::trace
};

// Invalid block: one error result per listed transaction, no state change.
// A schedule the runner produced that fails validation is an InvariantError.
BlockOutcome process_block(const BlockRunner& runner, const Block& block, const GlobalState& state,
                           std::optional<ExecOptions> exec = std::nullopt);

// Repeats process_block with per-trial jitter seeds and compares every
// outcome to execute_sequential over a topological order of the runner's
// schedule. Throws ValidationError when trials < 2.
StressReport stress_runner(const BlockRunner& runner, const Block& block, const GlobalState& state,
                           std::size_t trials, ExecOptions exec);

// Ledger: little-endian u32 length followed by a JSON payload, per record.
// The first record holds the initial-state digest; each further record one
// block, chained by digest.
struct LedgerRecord {
    std::uint64_t seq = 0;
    std::string block_hash;
    std::string results_digest;
    std::string state_digest;
    ValueMap changes;
    std::string chain;
};

struct LedgerContents {
    std::string initial_state_digest;
    std::string genesis_chain;
    std::vector<LedgerRecord> records;
    std::uint64_t valid_bytes = 0;
    bool torn_tail = false;  // trailing partial record
};

// Throws ValidationError when a complete record is malformed or the digest
// chain does not verify. A missing file reads as empty.
LedgerContents read_ledger(const std::string& path);

struct MainLoopOptions {
    bool resume = false;
    // Stop after this many newly processed blocks (simulates a crash).
    std::optional<std::size_t> max_blocks;
    std::optional<ExecOptions> exec;
};

struct MainLoopResult {
    GlobalState state;
    std::size_t resumed = 0;    // blocks recovered from the ledger
    std::size_t processed = 0;  // blocks executed by this call
    std::vector<std::vector<TxResult>> results;  // per executed block
};

// Blocks must carry seq 0, 1, ... and prev_hash equal to the hash of the
// previous block (genesis_hash() for the first); a violation halts the loop
// with a ValidationError after everything before it has been persisted. With
// resume, the ledger's chain and state are verified and processing continues
// after its last record. An empty ledger_path disables persistence.
MainLoopResult run_main_loop(const BlockRunner& runner, const std::vector<Block>& stream,
                             const GlobalState& initial, const std::string& ledger_path,
                             MainLoopOptions options = {});

}  // namespace detsched

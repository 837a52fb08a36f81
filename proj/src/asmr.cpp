#include "detsched/asmr.hpp"

#include "detsched/coloring.hpp"
#include "detsched/errors.hpp"
#include "detsched/rng.hpp"
#include "detsched/workload.hpp"

namespace detsched {

const char* to_string(ColoringMode m) {
    switch (m) {
        case ColoringMode::Greedy: return "greedy";
        case ColoringMode::Exact: return "exact";
        case ColoringMode::WeightedExact: return "weighted-exact";
    }
    return "greedy";
}

const char* to_string(ColorOrder o) { return o == ColorOrder::Ascending ? "ascending" : "size-desc"; }

ColoringMode coloring_mode_from_string(const std::string& s) {
    if (s == "greedy") return ColoringMode::Greedy;
    if (s == "exact") return ColoringMode::Exact;
    if (s == "weighted-exact") return ColoringMode::WeightedExact;
    throw ValidationError("unknown coloring mode '" + s + "'");
}

ColorOrder color_order_from_string(const std::string& s) {
    if (s == "ascending") return ColorOrder::Ascending;
    if (s == "size-desc") return ColorOrder::SizeDescending;
    throw ValidationError("unknown color order '" + s + "'");
}

Partition choose_partition(const Block& block, const ConflictGraph& g, const RunnerOptions& options,
                           ColoringMode mode, ScheduleMetadata& meta) {
    if (options.partition) {
        meta.coloring = "custom";
        Partition p = options.partition(block, g);
        try {
            require_legal_partition(p, g);
        } catch (const ValidationError& e) {
            throw InvariantError(std::string("runner partition is not legal: ") + e.what());
        }
        return p;
    }
    auto note = [&](const std::string& s) {
        meta.note += (meta.note.empty() ? "" : "; ") + s;
    };
    if (mode == ColoringMode::WeightedExact && options.treat_epsilon_homogeneous &&
        is_epsilon_homogeneous(block, *options.treat_epsilon_homogeneous)) {
        mode = ColoringMode::Exact;
        note("epsilon-homogeneous block colored as homogeneous");
    }
    if (mode == ColoringMode::WeightedExact && g.size() > options.weighted_cap) {
        mode = ColoringMode::Exact;
        meta.fell_back = true;
        note("weighted-exact above cap " + std::to_string(options.weighted_cap) + ", used exact");
    }
    if (mode == ColoringMode::Exact && g.size() > options.exact_cap) {
        mode = ColoringMode::Greedy;
        meta.fell_back = true;
        note("exact above cap " + std::to_string(options.exact_cap) + ", used greedy");
    }
    meta.coloring = to_string(mode);
    Coloring c;
    switch (mode) {
        case ColoringMode::Greedy: c = greedy_coloring(g, descending_degree_order(g)); break;
        case ColoringMode::Exact: c = exact_min_coloring(g, options.exact_cap); break;
        case ColoringMode::WeightedExact:
            c = exact_min_weighted_coloring(g, lengths_of(block), options.weighted_cap);
            break;
    }
    if (!is_legal_coloring(c, g)) throw InvariantError("coloring is not legal");
    return options.order == ColorOrder::Ascending ? ascending_color_order(c) : size_descending_color_order(c);
}

GraphSchedule as_graph(const Schedule& s) {
    if (const auto* g = std::get_if<GraphSchedule>(&s)) return *g;
    return batch_to_graph(std::get<BatchSchedule>(s));
}

bool BlockRunner::validate_schedule(const Block& block, const ConflictGraph& g, const Schedule& s) const {
    try {
        if (const auto* gs = std::get_if<GraphSchedule>(&s)) {
            return gs->size() == block.txs.size() && is_valid_schedule(*gs, g);
        }
        require_legal_batches(std::get<BatchSchedule>(s), g);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

std::unique_ptr<Execution> BlockRunner::init_execution(const Block& block, const Schedule& s,
                                                       const GlobalState& state,
                                                       std::optional<ExecOptions> exec) const {
    const ExecOptions opts = exec.value_or(options_.exec);
    if (const auto* gs = std::get_if<GraphSchedule>(&s)) {
        return std::make_unique<GraphExecution>(block, *gs, state, opts);
    }
    return std::make_unique<BatchExecution>(block, std::get<BatchSchedule>(s), state, opts);
}

namespace {

class OrderRunner final : public BlockRunner {
public:
    explicit OrderRunner(RunnerOptions options) : BlockRunner(std::move(options)) {}
    std::string name() const override { return "order"; }
    ScheduledBlock make_schedule(const Block& block, const ConflictGraph& g) const override {
        ScheduledBlock out{total_order_schedule(block, g), {}};
        out.meta.runner = name();
        return out;
    }
};

class ColoringRunner final : public BlockRunner {
public:
    ColoringRunner(std::string name, ColoringMode fallback_mode, bool batch, RunnerOptions options)
        : BlockRunner(std::move(options)), name_(std::move(name)), mode_(fallback_mode), batch_(batch) {}

    std::string name() const override { return name_; }

    ScheduledBlock make_schedule(const Block& block, const ConflictGraph& g) const override {
        ScheduledBlock out{GraphSchedule{}, {}};
        out.meta.runner = name_;
        Partition levels = choose_partition(block, g, options_, options_.coloring.value_or(mode_), out.meta);
        if (batch_) {
            out.schedule = BatchSchedule{levels};
        } else {
            out.schedule = level_schedule(levels, g);
        }
        out.meta.levels = std::move(levels);
        return out;
    }

private:
    std::string name_;
    ColoringMode mode_;
    bool batch_;
};

}  // namespace

const std::vector<std::string>& runner_names() {
    static const std::vector<std::string> names{"order", "level-greedy", "min-coloring", "batch"};
    return names;
}

std::unique_ptr<BlockRunner> make_runner(const std::string& name, RunnerOptions options) {
    if (name == "order") return std::make_unique<OrderRunner>(std::move(options));
    if (name == "level-greedy") {
        return std::make_unique<ColoringRunner>(name, ColoringMode::Greedy, false, std::move(options));
    }
    if (name == "min-coloring") {
        return std::make_unique<ColoringRunner>(name, ColoringMode::Exact, false, std::move(options));
    }
    if (name == "batch") return std::make_unique<ColoringRunner>(name, ColoringMode::Exact, true, std::move(options));
    throw ValidationError("unknown runner '" + name + "'");
}

BlockOutcome process_block(const BlockRunner& runner, const Block& block, const GlobalState& state,
                           std::optional<ExecOptions> exec) {
    BlockOutcome out;
    if (auto problem = check_block(block)) {
        out.valid = false;
        for (const auto& tx : block.txs) {
            TxResult r;
            r.tx_id = tx.id;
            r.error = "invalid block: " + *problem;
            out.results.push_back(std::move(r));
        }
        return out;
    }
    const ConflictGraph g = build_conflict_graph(block);
    ScheduledBlock scheduled = runner.make_schedule(block, g);
    if (!runner.validate_schedule(block, g, scheduled.schedule)) {
        throw InvariantError("runner '" + runner.name() + "' produced an invalid schedule");
    }
    auto execution = runner.init_execution(block, scheduled.schedule, state, exec);
    execution->start();
    while (execution->is_running()) {
        for (auto& r : execution->next_results()) out.results.push_back(std::move(r));
    }
    execution->wait();
    for (auto& r : execution->next_results()) out.results.push_back(std::move(r));
    out.state_changes = execution->state_changes();
    out.trace = execution->trace();
    out.schedule = std::move(scheduled);
    return out;
}

StressReport stress_runner(const BlockRunner& runner, const Block& block, const GlobalState& state,
                           std::size_t trials, ExecOptions exec) {
    if (trials < 2) throw ValidationError("stress needs at least 2 trials");
    const ConflictGraph g = build_conflict_graph(block);
    const GraphSchedule graph = as_graph(runner.make_schedule(block, g).schedule);
    const auto reference = execute_sequential(block, graph.topological_order(), state);
    StressReport report;
    for (std::size_t t = 0; t < trials; ++t) {
        ExecOptions trial = exec;
        trial.jitter_seed = derive_seed(exec.jitter_seed, {t});
        BlockOutcome outcome = process_block(runner, block, state, trial);
        ExecutionOutcome got;
        got.results = std::move(outcome.results);
        got.state_changes = std::move(outcome.state_changes);
        ++report.trials;
        if (auto diff = compare_outcomes(reference, got)) {
            report.deterministic = false;
            report.diff = "trial " + std::to_string(t) + ": " + *diff;
            return report;
        }
    }
    return report;
}

}  // namespace detsched

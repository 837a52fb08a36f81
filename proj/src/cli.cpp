#include "detsched/cli.hpp"

#include <cstdio>
#include <sstream>

#include <CLI11.hpp>

#include "detsched/analysis.hpp"
#include "detsched/asmr.hpp"
#include "detsched/block_io.hpp"
#include "detsched/coloring.hpp"
#include "detsched/digest.hpp"
#include "detsched/errors.hpp"
#include "detsched/workload.hpp"

namespace detsched {

namespace {

struct RunnerFlags {
    std::string runner = "min-coloring";
    std::string coloring;
    std::string color_order = "size-desc";
    std::size_t exact_cap = kDefaultExactColoringCap;
    std::size_t weighted_cap = kDefaultWeightedColoringCap;
    bool treat_eps = false;
    Length epsilon = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--runner", runner, "order | level-greedy | min-coloring | batch")->capture_default_str();
        cmd->add_option("--coloring", coloring, "greedy | exact | weighted-exact (default depends on runner)");
        cmd->add_option("--color-order", color_order, "ascending | size-desc")->capture_default_str();
        cmd->add_option("--exact-cap", exact_cap, "vertex cap for exact coloring")->capture_default_str();
        cmd->add_option("--weighted-cap", weighted_cap, "vertex cap for exact weighted coloring")
            ->capture_default_str();
        cmd->add_flag("--treat-epsilon-homogeneous", treat_eps,
                      "color epsilon-homogeneous blocks as homogeneous under weighted-exact");
        cmd->add_option("--epsilon", epsilon, "length spread tolerated by --treat-epsilon-homogeneous")
            ->capture_default_str();
    }

    std::unique_ptr<BlockRunner> make(ExecOptions exec = {}) const {
        RunnerOptions o;
        if (!coloring.empty()) o.coloring = coloring_mode_from_string(coloring);
        o.order = color_order_from_string(color_order);
        o.exact_cap = exact_cap;
        o.weighted_cap = weighted_cap;
        if (treat_eps) o.treat_epsilon_homogeneous = epsilon;
        o.exec = exec;
        return make_runner(runner, std::move(o));
    }
};

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

GlobalState load_state(const std::string& path) {
    return path.empty() ? GlobalState{} : parse_state(read_file(path));
}

void print_meta(std::ostream& out, const ScheduleMetadata& meta) {
    out << "runner: " << meta.runner << '\n';
    if (!meta.coloring.empty()) out << "coloring: " << meta.coloring << '\n';
    if (meta.fell_back) out << "fallback: yes\n";
    if (!meta.note.empty()) out << "note: " << meta.note << '\n';
}

int cmd_schedule(const std::string& block_file, const RunnerFlags& flags, std::ostream& out) {
    const Block block = read_block_file(block_file);
    require_valid_block(block);
    const auto runner = flags.make();
    const ConflictGraph g = build_conflict_graph(block);
    const ScheduledBlock s = runner->make_schedule(block, g);
    if (!runner->validate_schedule(block, g, s.schedule)) throw InvariantError("runner produced an invalid schedule");
    const GraphSchedule graph = as_graph(s.schedule);
    const auto lengths = lengths_of(block);
    const LatencyReport report = latency_stats(graph, lengths);
    if (const auto* b = std::get_if<BatchSchedule>(&s.schedule)) {
        if (batch_latency(*b, lengths) != report.block_latency) {
            throw InvariantError("batch latency differs from its graph form");
        }
    }
    print_meta(out, s.meta);
    out << "# schedule\n" << dump_schedule(graph);
    out << "# levels\n" << dump_levels(s.meta.levels);
    out << "block_latency: " << report.block_latency << '\n';
    out << "mean_latency: " << fmt_double(report.mean_latency()) << '\n';
    out << "p95_latency: " << report.p95_latency << '\n';
    return 0;
}

struct ExecuteFlags {
    std::string state_file;
    bool simulate = false;
    bool trace = false;
    std::int64_t jitter_ns = 0;
    std::uint64_t seed = 0;
    std::size_t pool = 0;
};

int cmd_execute(const std::string& block_file, const RunnerFlags& flags, const ExecuteFlags& ef,
                std::ostream& out) {
    const Block block = read_block_file(block_file);
    const GlobalState state = load_state(ef.state_file);
    ExecOptions exec;
    exec.max_jitter = std::chrono::nanoseconds(ef.jitter_ns);
    exec.jitter_seed = ef.seed;
    exec.pool_size = ef.pool;
    exec.trace = ef.trace;
    const auto runner = flags.make(exec);
    BlockOutcome outcome = process_block(*runner, block, state);
    GlobalState final_state = state;
    final_state.apply(outcome.state_changes);
    if (outcome.schedule) print_meta(out, outcome.schedule->meta);
    if (!outcome.valid) out << "invalid block\n";
    out << "# results\n" << serialize_results(outcome.results) << '\n';
    out << "# state\n" << serialize_state(final_state) << '\n';
    if (ef.simulate && outcome.valid) {
        const GraphSchedule graph = as_graph(outcome.schedule->schedule);
        const SimulationResult sim = simulate_execution(block, graph, state);
        const std::uint64_t lt = latency(graph, lengths_of(block));
        out << "makespan: " << sim.makespan << '\n';
        out << "latency: " << lt << '\n';
        if (sim.makespan != lt) throw InvariantError("simulated makespan differs from schedule latency");
        ExecutionOutcome concurrent;
        concurrent.results = outcome.results;
        concurrent.state_changes = outcome.state_changes;
        if (auto diff = compare_outcomes(sim.outcome, concurrent)) {
            throw InvariantError("simulated and concurrent outcomes differ: " + *diff);
        }
    }
    if (ef.trace) {
        out << "# trace\n" << dump_trace(outcome.trace);
        if (outcome.valid && !conflicting_intervals_disjoint(outcome.trace, build_conflict_graph(block))) {
            throw InvariantError("conflicting transactions overlapped in time");
        }
    }
    return 0;
}

int cmd_asmr(const std::string& stream_file, const RunnerFlags& flags, const std::string& ledger,
             const std::string& state_file, bool resume, std::optional<std::size_t> max_blocks, std::ostream& out) {
    const auto blocks = read_stream_file(stream_file);
    const GlobalState initial = load_state(state_file);
    const auto runner = flags.make();
    MainLoopOptions opts;
    opts.resume = resume;
    opts.max_blocks = max_blocks;
    const MainLoopResult r = run_main_loop(*runner, blocks, initial, ledger, opts);
    out << "resumed: " << r.resumed << '\n';
    out << "processed: " << r.processed << '\n';
    out << "state_digest: " << state_digest(r.state) << '\n';
    return 0;
}

int cmd_oracle(const std::string& block_file, std::size_t cap, bool double_check, std::ostream& out) {
    const Block block = read_block_file(block_file);
    const OracleResult r = optimal_schedule_oracle(block, cap);
    out << "optimal_latency: " << r.optimal_latency << '\n';
    if (double_check) {
        const auto other = orientation_oracle(block);
        out << "orientation_oracle: " << other << '\n';
        if (other != r.optimal_latency) throw InvariantError("oracles disagree");
    }
    out << "# levels\n" << dump_levels(r.levels);
    out << "# schedule\n" << dump_schedule(r.schedule);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic scheduling of conflicting transaction blocks"};
    app.require_subcommand(1);

    RunnerFlags rf_schedule, rf_execute, rf_asmr;
    std::string block_file, stream_file, spec_file, out_file, ledger, state_file;

    auto* schedule = app.add_subcommand("schedule", "print a block's schedule, levels and latency");
    schedule->add_option("block", block_file, "block file")->required();
    rf_schedule.attach(schedule);

    ExecuteFlags ef;
    auto* execute = app.add_subcommand("execute", "run a block and print results and final state");
    execute->add_option("block", block_file, "block file")->required();
    execute->add_option("--state", ef.state_file, "initial state file");
    execute->add_flag("--simulate", ef.simulate, "also simulate and check makespan == latency");
    execute->add_flag("--trace", ef.trace, "print per-transaction intervals: id start_ns end_ns");
    execute->add_option("--jitter-ns", ef.jitter_ns, "max random delay before reads and before writes");
    execute->add_option("--seed", ef.seed, "jitter seed");
    execute->add_option("--pool", ef.pool, "bounded worker pool size (0: one worker per transaction)");
    rf_execute.attach(execute);

    bool resume = false;
    std::optional<std::size_t> max_blocks;
    auto* asmr = app.add_subcommand("asmr", "run the main loop over a block stream");
    asmr->add_option("stream", stream_file, "block stream file (one block per line)")->required();
    asmr->add_option("--ledger", ledger, "ledger file");
    asmr->add_option("--state", state_file, "initial state file");
    asmr->add_flag("--resume", resume, "verify the ledger and continue after its last record");
    asmr->add_option("--max-blocks", max_blocks, "stop after this many blocks");
    rf_asmr.attach(asmr);

    std::vector<std::size_t> ns{100};
    std::vector<double> ps{0.01};
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    bool random_order = false;
    auto* analyze = app.add_subcommand("analyze", "order-vulnerability ratio study over G(n,p) graphs");
    analyze->add_option("--ns", ns, "block sizes")->delimiter(',')->capture_default_str();
    analyze->add_option("--ps", ps, "edge probabilities")->delimiter(',')->capture_default_str();
    analyze->add_option("--samples", samples, "samples per cell")->capture_default_str();
    analyze->add_option("--seed", seed, "seed")->capture_default_str();
    analyze->add_option("--threads", threads, "worker threads")->capture_default_str();
    analyze->add_flag("--random-order", random_order, "random vertex order for the path estimate");
    analyze->add_option("--out", out_file, "CSV output (default stdout)");

    std::size_t cap = kDefaultOracleCap;
    bool double_check = false;
    auto* oracle = app.add_subcommand("oracle", "optimal latency and a witness level schedule");
    oracle->add_option("block", block_file, "block file")->required();
    oracle->add_option("--cap", cap, "transaction cap")->capture_default_str();
    oracle->add_flag("--double-check", double_check, "cross-check against every acyclic orientation");

    std::uint64_t seq = 0;
    std::string prev_hash;
    auto* gen_block_cmd = app.add_subcommand("gen-block", "generate a block from a workload spec");
    gen_block_cmd->add_option("spec", spec_file, "workload spec file")->required();
    gen_block_cmd->add_option("--seq", seq, "block sequence number");
    gen_block_cmd->add_option("--prev-hash", prev_hash, "previous block hash (default genesis)");
    gen_block_cmd->add_option("--out", out_file, "output file (default stdout)");

    auto* gen_stream_cmd = app.add_subcommand("gen-stream", "generate a chained block stream from a list of specs");
    gen_stream_cmd->add_option("specs", spec_file, "workload spec file (object or array)")->required();
    gen_stream_cmd->add_option("--out", out_file, "output file (default stdout)");

    std::size_t n_max = 7, trials = 1000;
    bool homogeneous = false;
    auto* search = app.add_subcommand("counterexamples", "search random blocks for coloring counterexamples");
    search->add_option("--n-max", n_max, "largest block size")->capture_default_str();
    search->add_option("--trials", trials, "random blocks to try")->capture_default_str();
    search->add_option("--seed", seed, "seed")->capture_default_str();
    search->add_flag("--homogeneous", homogeneous, "all lengths 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto emit = [&](const std::string& text) {
        if (out_file.empty()) {
            out << text;
        } else {
            write_file(out_file, text);
        }
    };

    try {
        if (*schedule) return cmd_schedule(block_file, rf_schedule, out);
        if (*execute) return cmd_execute(block_file, rf_execute, ef, out);
        if (*asmr) return cmd_asmr(stream_file, rf_asmr, ledger, state_file, resume, max_blocks, out);
        if (*analyze) {
            StudyOptions so;
            so.threads = threads;
            so.random_order = random_order;
            emit(ratio_csv(vulnerability_study(ns, ps, samples, seed, so)));
            return 0;
        }
        if (*oracle) return cmd_oracle(block_file, cap, double_check, out);
        if (*gen_block_cmd) {
            const Block b = gen_block(parse_workload_spec(read_file(spec_file)), seq,
                                      prev_hash.empty() ? genesis_hash() : prev_hash);
            emit(serialize_block(b) + "\n");
            return 0;
        }
        if (*gen_stream_cmd) {
            emit(serialize_stream(gen_stream(parse_workload_specs(read_file(spec_file)), genesis_hash())));
            return 0;
        }
        if (*search) {
            out << format_report(hetero_counterexample_search(n_max, trials, seed, homogeneous));
            return 0;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return 3;
    } catch (const InvariantError& e) {
        err << "invariant violated: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}

}  // namespace detsched

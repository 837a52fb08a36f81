#include "detsched/executor.hpp"

#include <algorithm>
#include <latch>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "detsched/errors.hpp"
#include "detsched/rng.hpp"

namespace detsched {

namespace detail {

// Latest committed value per key. Validity of the schedule guarantees that a
// key is never read and written concurrently, so each slot only needs an
// atomic publish; ordering comes from the signals.
class SharedStore {
public:
    SharedStore(const Block& block, const GlobalState& state) {
        for (const auto& tx : block.txs) {
            keys_.insert(keys_.end(), tx.read_set.begin(), tx.read_set.end());
            keys_.insert(keys_.end(), tx.write_set.begin(), tx.write_set.end());
        }
        std::sort(keys_.begin(), keys_.end());
        keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
        values_ = std::make_unique<std::atomic<Value>[]>(keys_.size());
        written_ = std::make_unique<std::atomic<bool>[]>(keys_.size());
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            values_[i].store(state.get(keys_[i]), std::memory_order_relaxed);
            written_[i].store(false, std::memory_order_relaxed);
        }
        read_slots_.resize(block.txs.size());
        write_slots_.resize(block.txs.size());
        for (const auto& tx : block.txs) {
            for (const auto& k : tx.read_set) read_slots_.at(tx.id).push_back(slot(k));
            for (const auto& k : tx.write_set) write_slots_.at(tx.id).push_back(slot(k));
        }
    }

    ValueMap read(const Transaction& tx) const {
        ValueMap reads;
        const auto& slots = read_slots_[tx.id];
        for (std::size_t i = 0; i < slots.size(); ++i) {
            reads.emplace(tx.read_set[i], values_[slots[i]].load(std::memory_order_acquire));
        }
        return reads;
    }

    void write(const Transaction& tx, const ValueMap& writes) {
        const auto& slots = write_slots_[tx.id];
        for (std::size_t i = 0; i < slots.size(); ++i) {
            auto it = writes.find(tx.write_set[i]);
            if (it == writes.end()) continue;
            values_[slots[i]].store(it->second, std::memory_order_release);
            written_[slots[i]].store(true, std::memory_order_release);
        }
    }

    ValueMap changes() const {
        ValueMap out;
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            if (written_[i].load(std::memory_order_acquire)) out[keys_[i]] = values_[i].load(std::memory_order_acquire);
        }
        return out;
    }

private:
    std::size_t slot(const ObjectKey& key) const {
        return static_cast<std::size_t>(std::lower_bound(keys_.begin(), keys_.end(), key) - keys_.begin());
    }

    std::vector<ObjectKey> keys_;
    std::unique_ptr<std::atomic<Value>[]> values_;
    std::unique_ptr<std::atomic<bool>[]> written_;
    std::vector<std::vector<std::size_t>> read_slots_;
    std::vector<std::vector<std::size_t>> write_slots_;
};

class EmitLog {
public:
    explicit EmitLog(std::size_t total) : total_(total), epoch_(std::chrono::steady_clock::now()) {}

    std::int64_t now_ns() const {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - epoch_)
            .count();
    }

    void emit(TxResult result, std::optional<TraceInterval> interval) {
        {
            std::lock_guard lock(mutex_);
            results_.push_back(std::move(result));
            if (interval) trace_.push_back(*interval);
            ++done_;
        }
        cv_.notify_all();
    }

    void fail(std::exception_ptr error) {
        {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = error;
            ++done_;
        }
        cv_.notify_all();
    }

    bool running() const {
        std::lock_guard lock(mutex_);
        return done_ < total_;
    }

    std::vector<TxResult> drain() {
        std::unique_lock lock(mutex_);
        if (cursor_ == results_.size() && done_ < total_) {
            cv_.wait_for(lock, std::chrono::milliseconds(20),
                         [&] { return cursor_ < results_.size() || done_ >= total_; });
        }
        std::vector<TxResult> out(results_.begin() + static_cast<std::ptrdiff_t>(cursor_), results_.end());
        cursor_ = results_.size();
        return out;
    }

    void wait_all() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return done_ >= total_; });
    }

    void rethrow() const {
        std::lock_guard lock(mutex_);
        if (error_) std::rethrow_exception(error_);
    }

    std::vector<TraceInterval> trace() const {
        std::lock_guard lock(mutex_);
        return trace_;
    }

private:
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::vector<TxResult> results_;
    std::vector<TraceInterval> trace_;
    std::size_t cursor_ = 0;
    std::size_t done_ = 0;
    std::size_t total_;
    std::exception_ptr error_;
    std::chrono::steady_clock::time_point epoch_;
};

}  // namespace detail

namespace {

void jitter(Rng* rng, std::chrono::nanoseconds max) {
    if (rng == nullptr || max.count() <= 0) return;
    auto ns = rng->uniform(0, static_cast<std::uint64_t>(max.count()));
    if (ns > 0) std::this_thread::sleep_for(std::chrono::nanoseconds(ns));
}

// The body every worker runs once its transaction may start. `release` is
// invoked after the result is emitted, or between compute and write-back
// when the fault is injected.
template <typename Release>
void run_transaction(const Transaction& tx, detail::SharedStore& store, detail::EmitLog& log,
                     const ExecOptions& options, Release&& release) {
    std::optional<Rng> rng;
    if (options.max_jitter.count() > 0) rng.emplace(derive_seed(options.jitter_seed, {tx.id}));
    Rng* r = rng ? &*rng : nullptr;

    jitter(r, options.max_jitter);
    const std::int64_t start = log.now_ns();
    TxResult result;
    result.tx_id = tx.id;
    result.read_values = store.read(tx);
    result.written_values = run_program(tx, result.read_values);
    if (options.release_before_writeback) release();
    jitter(r, options.max_jitter);
    store.write(tx, result.written_values);
    const std::int64_t end = log.now_ns();
    std::optional<TraceInterval> interval;
    if (options.trace) interval = TraceInterval{tx.id, start, end};
    log.emit(std::move(result), interval);
    if (!options.release_before_writeback) release();
}

}  // namespace

class GraphExecution::Signal {
public:
    void release() {
        open_.store(true, std::memory_order_release);
        open_.notify_all();
    }

    void await() const {
        while (!open_.load(std::memory_order_acquire)) open_.wait(false, std::memory_order_acquire);
    }

private:
    std::atomic<bool> open_{false};
};

GraphExecution::GraphExecution(const Block& block, const GraphSchedule& schedule, const GlobalState& state,
                               ExecOptions options)
    : block_(block), schedule_(schedule), options_(options) {
    if (schedule_.size() != block_.txs.size()) throw ValidationError("schedule does not match block size");
    require_valid_schedule(schedule_, build_conflict_graph(block_));
    by_id_ = index_by_id(block_);
    const std::size_t n = block_.txs.size();
    store_ = std::make_unique<detail::SharedStore>(block_, state);
    log_ = std::make_unique<detail::EmitLog>(n);
    const auto& edges = schedule_.edges();
    signals_ = std::make_unique<Signal[]>(edges.size());
    incoming_.resize(n);
    outgoing_.resize(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        outgoing_[edges[e].first].push_back(e);
        incoming_[edges[e].second].push_back(e);
    }
    start_gate_ = std::make_unique<Signal>();

    if (options_.pool_size == 0) {
        workers_.reserve(n);
        for (TxId id = 0; id < n; ++id) workers_.emplace_back([this, id] { run_worker(id); });
    } else {
        pending_ = std::make_unique<std::atomic<std::size_t>[]>(n);
        for (TxId id = 0; id < n; ++id) {
            pending_[id].store(incoming_[id].size());
            if (incoming_[id].empty()) ready_.push_back(id);
        }
        std::sort(ready_.rbegin(), ready_.rend());
        const std::size_t workers = std::min(options_.pool_size, std::max<std::size_t>(n, 1));
        for (std::size_t i = 0; i < workers; ++i) workers_.emplace_back([this] { run_pool_worker(); });
    }
}

GraphExecution::~GraphExecution() {
    if (!started_) {
        cancelled_.store(true);
        start_gate_->release();
        ready_cv_.notify_all();
    }
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
}

void GraphExecution::finish_tx(TxId id) {
    for (std::size_t e : outgoing_[id]) {
        signals_[e].release();
        if (pending_) {
            const TxId next = schedule_.edges()[e].second;
            if (pending_[next].fetch_sub(1) == 1) {
                {
                    std::lock_guard lock(ready_mutex_);
                    ready_.push_back(next);
                }
                ready_cv_.notify_one();
            }
        }
    }
}

void GraphExecution::run_worker(TxId id) {
    start_gate_->await();
    if (cancelled_.load()) return;
    try {
        for (std::size_t e : incoming_[id]) signals_[e].await();
        run_transaction(*by_id_[id], *store_, *log_, options_, [&] { finish_tx(id); });
    } catch (...) {
        log_->fail(std::current_exception());
        finish_tx(id);
    }
}

void GraphExecution::run_pool_worker() {
    start_gate_->await();
    const std::size_t n = block_.txs.size();
    while (true) {
        TxId id;
        {
            std::unique_lock lock(ready_mutex_);
            ready_cv_.wait(lock, [&] { return cancelled_.load() || !ready_.empty() || dispatched_ == n; });
            if (cancelled_.load() || (ready_.empty() && dispatched_ == n)) return;
            id = ready_.back();
            ready_.pop_back();
            ++dispatched_;
        }
        if (dispatched_ == n) ready_cv_.notify_all();
        try {
            for (std::size_t e : incoming_[id]) signals_[e].await();
            run_transaction(*by_id_[id], *store_, *log_, options_, [&] { finish_tx(id); });
        } catch (...) {
            log_->fail(std::current_exception());
            finish_tx(id);
        }
    }
}

void GraphExecution::start() {
    if (started_) throw InvariantError("execution already started");
    started_ = true;
    start_gate_->release();
}

bool GraphExecution::is_running() const { return started_ && log_->running(); }

std::vector<TxResult> GraphExecution::next_results() { return log_->drain(); }

ValueMap GraphExecution::state_changes() const { return store_->changes(); }

std::vector<TraceInterval> GraphExecution::trace() const { return log_->trace(); }

void GraphExecution::wait() {
    if (!started_) throw InvariantError("wait() before start()");
    log_->wait_all();
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
    log_->rethrow();
}

BatchExecution::BatchExecution(const Block& block, const BatchSchedule& batches, const GlobalState& state,
                               ExecOptions options)
    : block_(block), batches_(batches), options_(options) {
    require_legal_batches(batches_, build_conflict_graph(block_));
    by_id_ = index_by_id(block_);
    store_ = std::make_unique<detail::SharedStore>(block_, state);
    log_ = std::make_unique<detail::EmitLog>(block_.txs.size());
}

BatchExecution::~BatchExecution() {
    if (coordinator_.joinable()) coordinator_.join();
}

void BatchExecution::run_batches() {
    // A batch is complete once every member released its share; with the
    // fault injected that happens before the write-back, so the workers are
    // only joined at the very end.
    std::vector<std::unique_ptr<std::latch>> latches;
    std::vector<std::unique_ptr<std::atomic<std::size_t>>> cursors;
    std::vector<std::thread> threads;
    for (const auto& batch : batches_.batches) {
        auto& done = *latches.emplace_back(std::make_unique<std::latch>(static_cast<std::ptrdiff_t>(batch.size())));
        auto& next = *cursors.emplace_back(std::make_unique<std::atomic<std::size_t>>(0));
        const std::size_t workers =
            options_.pool_size == 0 ? batch.size() : std::min(options_.pool_size, batch.size());
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([this, &batch, &done, &next] {
                for (std::size_t i = next.fetch_add(1); i < batch.size(); i = next.fetch_add(1)) {
                    bool released = false;
                    auto release = [&] {
                        released = true;
                        done.count_down();
                    };
                    try {
                        run_transaction(*by_id_[batch[i]], *store_, *log_, options_, release);
                    } catch (...) {
                        log_->fail(std::current_exception());
                        if (!released) done.count_down();
                    }
                }
            });
        }
        done.wait();
    }
    for (auto& t : threads) t.join();
}

void BatchExecution::start() {
    if (coordinator_.joinable()) throw InvariantError("execution already started");
    coordinator_ = std::thread([this] { run_batches(); });
}

bool BatchExecution::is_running() const { return log_->running(); }

std::vector<TxResult> BatchExecution::next_results() { return log_->drain(); }

ValueMap BatchExecution::state_changes() const { return store_->changes(); }

std::vector<TraceInterval> BatchExecution::trace() const { return log_->trace(); }

void BatchExecution::wait() {
    if (coordinator_.joinable()) coordinator_.join();
    log_->rethrow();
}

namespace {

template <typename Exec>
ExecutionOutcome drain_to_completion(Exec& exec) {
    ExecutionOutcome out;
    exec.start();
    while (exec.is_running()) {
        for (auto& r : exec.next_results()) out.results.push_back(std::move(r));
    }
    exec.wait();
    for (auto& r : exec.next_results()) out.results.push_back(std::move(r));
    for (const auto& r : out.results) out.emission_order.push_back(r.tx_id);
    out.state_changes = exec.state_changes();
    out.trace = exec.trace();
    return out;
}

}  // namespace

ExecutionOutcome execute_sequential(const Block& block, const std::vector<TxId>& order, const GlobalState& state) {
    require_valid_block(block);
    const std::size_t n = block.txs.size();
    if (order.size() != n) throw ValidationError("order is not a permutation of the block's ids");
    std::vector<bool> seen(n, false);
    for (TxId id : order) {
        if (id >= n || seen[id]) throw ValidationError("order is not a permutation of the block's ids");
        seen[id] = true;
    }
    auto by_id = index_by_id(block);
    GlobalState current = state;
    ExecutionOutcome out;
    for (TxId id : order) {
        const Transaction& tx = *by_id[id];
        TxResult r;
        r.tx_id = id;
        for (const auto& k : tx.read_set) r.read_values[k] = current.get(k);
        r.written_values = run_program(tx, r.read_values);
        current.apply(r.written_values);
        for (const auto& [k, v] : r.written_values) out.state_changes[k] = v;
        out.emission_order.push_back(id);
        out.results.push_back(std::move(r));
    }
    return out;
}

ExecutionOutcome execute_graph_schedule(const Block& block, const GraphSchedule& schedule, const GlobalState& state,
                                        ExecOptions options) {
    GraphExecution exec(block, schedule, state, options);
    return drain_to_completion(exec);
}

ExecutionOutcome execute_batch_schedule(const Block& block, const BatchSchedule& batches, const GlobalState& state,
                                        ExecOptions options) {
    BatchExecution exec(block, batches, state, options);
    return drain_to_completion(exec);
}

SimulationResult simulate_execution(const Block& block, const GraphSchedule& schedule, const GlobalState& state) {
    if (schedule.size() != block.txs.size()) throw ValidationError("schedule does not match block size");
    require_valid_schedule(schedule, build_conflict_graph(block));
    const std::size_t n = schedule.size();
    auto by_id = index_by_id(block);

    // (time, id) finish events, earliest first.
    using Event = std::pair<std::uint64_t, TxId>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::vector<std::size_t> waiting(n);
    std::vector<std::uint64_t> start(n, 0), finish(n, 0);
    for (TxId v = 0; v < n; ++v) {
        waiting[v] = schedule.predecessors(v).size();
        if (waiting[v] == 0) events.emplace(by_id[v]->length, v);
    }
    std::uint64_t clock = 0;
    while (!events.empty()) {
        auto [t, v] = events.top();
        events.pop();
        clock = t;
        finish[v] = t;
        for (TxId w : schedule.successors(v)) {
            if (--waiting[w] == 0) {
                start[w] = clock;
                events.emplace(clock + by_id[w]->length, w);
            }
        }
    }

    // Running the programs in start-time order is a topological order of the
    // schedule, so it reproduces what the concurrent run computes.
    std::vector<TxId> order(n);
    for (TxId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](TxId a, TxId b) { return std::tie(start[a], a) < std::tie(start[b], b); });
    SimulationResult sim;
    sim.outcome = execute_sequential(block, order, state);
    for (auto& r : sim.outcome.results) r.finish_time = finish[r.tx_id];
    sim.makespan = n == 0 ? 0 : *std::max_element(finish.begin(), finish.end());
    return sim;
}

std::optional<std::string> compare_outcomes(const ExecutionOutcome& expected, const ExecutionOutcome& actual) {
    auto key = [](const ExecutionOutcome& o) {
        std::map<TxId, const TxResult*> m;
        for (const auto& r : o.results) m[r.tx_id] = &r;
        return m;
    };
    auto a = key(expected);
    auto b = key(actual);
    if (a.size() != expected.results.size() || b.size() != actual.results.size()) {
        return std::string("duplicate results for one transaction");
    }
    if (a.size() != b.size()) {
        return "result count differs: " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
    }
    auto show = [](const ValueMap& m) {
        std::ostringstream s;
        s << '{';
        bool first = true;
        for (const auto& [k, v] : m) {
            s << (first ? "" : ",") << k << ':' << v;
            first = false;
        }
        s << '}';
        return s.str();
    };
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return "result ids differ at tx " + std::to_string(ia->first);
        const auto& x = *ia->second;
        const auto& y = *ib->second;
        if (x.read_values != y.read_values) {
            return "tx " + std::to_string(x.tx_id) + " read " + show(y.read_values) + ", expected " +
                   show(x.read_values);
        }
        if (x.written_values != y.written_values) {
            return "tx " + std::to_string(x.tx_id) + " wrote " + show(y.written_values) + ", expected " +
                   show(x.written_values);
        }
        if (x.error != y.error) return "tx " + std::to_string(x.tx_id) + " error status differs";
    }
    if (expected.state_changes != actual.state_changes) {
        return "state changes " + show(actual.state_changes) + ", expected " + show(expected.state_changes);
    }
    return std::nullopt;
}

StressReport stress_determinism(const Block& block, const GraphSchedule& schedule, const GlobalState& state,
                                std::size_t trials, ExecOptions options) {
    if (trials < 2) throw ValidationError("stress_determinism needs at least 2 trials");
    const auto reference = execute_sequential(block, schedule.topological_order(), state);
    StressReport report;
    for (std::size_t t = 0; t < trials; ++t) {
        ExecOptions trial = options;
        trial.jitter_seed = derive_seed(options.jitter_seed, {t});
        auto outcome = execute_graph_schedule(block, schedule, state, trial);
        ++report.trials;
        if (auto diff = compare_outcomes(reference, outcome)) {
            report.deterministic = false;
            report.diff = "trial " + std::to_string(t) + ": " + *diff;
            return report;
        }
    }
    return report;
}

bool conflicting_intervals_disjoint(const std::vector<TraceInterval>& trace, const ConflictGraph& g) {
    std::vector<const TraceInterval*> by_id(g.size(), nullptr);
    for (const auto& t : trace) {
        if (t.id < by_id.size()) by_id[t.id] = &t;
    }
    for (auto [u, v] : g.edges()) {
        const auto* a = by_id[u];
        const auto* b = by_id[v];
        if (a == nullptr || b == nullptr) return false;
        if (!(a->end_ns <= b->start_ns || b->end_ns <= a->start_ns)) return false;
    }
    return true;
}

std::string dump_trace(const std::vector<TraceInterval>& trace) {
    auto sorted = trace;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::ostringstream out;
    for (const auto& t : sorted) out << t.id << ' ' << t.start_ns << ' ' << t.end_ns << '\n';
    return out.str();
}

}  // namespace detsched

#include "detsched/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "detsched/errors.hpp"

namespace detsched {

GraphSchedule::GraphSchedule(std::size_t n, std::vector<std::pair<TxId, TxId>> edges)
    : edges_(std::move(edges)), successors_(n), predecessors_(n) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (auto [u, v] : edges_) {
        if (u >= n || v >= n) throw ValidationError("schedule edge endpoint out of range");
        if (u == v) throw ValidationError("schedule self-loop on " + std::to_string(u));
        successors_[u].push_back(v);
        predecessors_[v].push_back(u);
    }
    for (auto& p : predecessors_) std::sort(p.begin(), p.end());

    std::vector<std::size_t> indegree(n);
    for (std::size_t v = 0; v < n; ++v) indegree[v] = predecessors_[v].size();
    std::priority_queue<TxId, std::vector<TxId>, std::greater<>> ready;
    for (TxId v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push(v);
    }
    topo_.reserve(n);
    while (!ready.empty()) {
        TxId u = ready.top();
        ready.pop();
        topo_.push_back(u);
        for (TxId v : successors_[u]) {
            if (--indegree[v] == 0) ready.push(v);
        }
    }
    if (topo_.size() != n) throw ValidationError("schedule contains a cycle");
}

std::size_t BatchSchedule::size() const {
    std::size_t n = 0;
    for (const auto& b : batches) n += b.size();
    return n;
}

std::vector<Bitset> reachability(const GraphSchedule& s) {
    const std::size_t n = s.size();
    std::vector<Bitset> reach(n, Bitset(n));
    const auto& topo = s.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        for (TxId w : s.successors(*it)) {
            reach[*it].set(w);
            reach[*it] |= reach[w];
        }
    }
    return reach;
}

bool is_valid_schedule(const GraphSchedule& s, const ConflictGraph& g) {
    if (s.size() != g.size()) {
        throw ValidationError("schedule has " + std::to_string(s.size()) + " vertices, conflict graph has " +
                              std::to_string(g.size()));
    }
    auto reach = reachability(s);
    for (auto [u, v] : g.edges()) {
        if (!reach[u].test(v) && !reach[v].test(u)) return false;
    }
    return true;
}

void require_valid_schedule(const GraphSchedule& s, const ConflictGraph& g) {
    if (s.size() != g.size()) {
        throw ValidationError("schedule has " + std::to_string(s.size()) + " vertices, conflict graph has " +
                              std::to_string(g.size()));
    }
    auto reach = reachability(s);
    for (auto [u, v] : g.edges()) {
        if (!reach[u].test(v) && !reach[v].test(u)) {
            throw ValidationError("invalid schedule: conflicting transactions " + std::to_string(u) + " and " +
                                  std::to_string(v) + " are not ordered");
        }
    }
}

std::vector<std::uint64_t> finish_times(const GraphSchedule& s, const std::vector<Length>& lengths) {
    if (lengths.size() != s.size()) throw ValidationError("lengths do not match schedule size");
    std::vector<std::uint64_t> finish(s.size(), 0);
    for (TxId v : s.topological_order()) {
        std::uint64_t start = 0;
        for (TxId u : s.predecessors(v)) start = std::max(start, finish[u]);
        finish[v] = start + lengths[v];
    }
    return finish;
}

std::uint64_t latency(const GraphSchedule& s, const std::vector<Length>& lengths) {
    auto finish = finish_times(s, lengths);
    return finish.empty() ? 0 : *std::max_element(finish.begin(), finish.end());
}

LatencyReport latency_stats(const GraphSchedule& s, const std::vector<Length>& lengths) {
    LatencyReport r;
    r.per_tx_finish = finish_times(s, lengths);
    if (r.per_tx_finish.empty()) return r;
    r.block_latency = *std::max_element(r.per_tx_finish.begin(), r.per_tx_finish.end());
    r.finish_sum = std::accumulate(r.per_tx_finish.begin(), r.per_tx_finish.end(), std::uint64_t{0});
    auto sorted = r.per_tx_finish;
    std::sort(sorted.begin(), sorted.end());
    // nearest rank: ceil(0.95 * n), 1-based
    std::size_t rank = (95 * sorted.size() + 99) / 100;
    r.p95_latency = sorted[std::max<std::size_t>(rank, 1) - 1];
    return r;
}

GraphSchedule level_schedule(const Partition& levels, const ConflictGraph& g) {
    require_legal_partition(levels, g);
    const std::size_t n = g.size();
    // ancestors[v] = vertices with a path to v in the schedule built so far.
    std::vector<Bitset> ancestors(n, Bitset(n));
    std::vector<std::pair<TxId, TxId>> edges;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        for (std::size_t j = i; j-- > 0;) {
            for (TxId v : levels[i]) {
                for (TxId u : levels[j]) {
                    if (!g.has_edge(u, v) || ancestors[v].test(u)) continue;
                    edges.emplace_back(u, v);
                    // v has no successors yet, so only its own ancestor set grows.
                    ancestors[v].set(u);
                    ancestors[v] |= ancestors[u];
                }
            }
        }
    }
    return GraphSchedule(n, std::move(edges));
}

GraphSchedule total_order_schedule(const Block& block, const ConflictGraph& g) {
    if (block.txs.size() != g.size()) throw ValidationError("block and conflict graph sizes differ");
    std::vector<std::size_t> position(g.size());
    for (std::size_t i = 0; i < block.txs.size(); ++i) position.at(block.txs[i].id) = i;
    std::vector<std::pair<TxId, TxId>> edges;
    for (auto [u, v] : g.edges()) {
        if (position[u] < position[v]) {
            edges.emplace_back(u, v);
        } else {
            edges.emplace_back(v, u);
        }
    }
    return GraphSchedule(g.size(), std::move(edges));
}

void require_legal_batches(const BatchSchedule& b, const ConflictGraph& g) {
    require_legal_partition(b.batches, g);
}

GraphSchedule batch_to_graph(const BatchSchedule& b) {
    std::vector<std::pair<TxId, TxId>> edges;
    for (std::size_t i = 0; i + 1 < b.batches.size(); ++i) {
        for (TxId u : b.batches[i]) {
            for (TxId v : b.batches[i + 1]) edges.emplace_back(u, v);
        }
    }
    return GraphSchedule(b.size(), std::move(edges));
}

std::uint64_t batch_latency(const BatchSchedule& b, const std::vector<Length>& lengths) {
    std::uint64_t total = 0;
    for (const auto& batch : b.batches) {
        if (batch.empty()) throw ValidationError("batch schedule contains an empty batch");
        Length longest = 0;
        for (TxId v : batch) longest = std::max(longest, lengths.at(v));
        total += longest;
    }
    return total;
}

Partition reorder_partition(const Partition& p, const std::vector<int>& perm) {
    if (perm.size() != p.size()) throw ValidationError("permutation size does not match partition");
    std::vector<bool> seen(p.size(), false);
    Partition out;
    out.reserve(p.size());
    for (int x : perm) {
        if (x < 1 || static_cast<std::size_t>(x) > p.size() || seen[static_cast<std::size_t>(x - 1)]) {
            throw ValidationError("invalid permutation");
        }
        seen[static_cast<std::size_t>(x - 1)] = true;
        out.push_back(p[static_cast<std::size_t>(x - 1)]);
    }
    return out;
}

Partition ascending_color_order(const Coloring& c) { return partition_from_coloring(c); }

Partition size_descending_color_order(const Coloring& c) {
    Partition p = partition_from_coloring(c);
    std::stable_sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return p;
}

std::string dump_schedule(const GraphSchedule& s) {
    std::ostringstream out;
    out << s.size() << ' ' << s.edges().size() << '\n';
    for (auto [u, v] : s.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

}  // namespace detsched

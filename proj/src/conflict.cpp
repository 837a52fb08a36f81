#include "detsched/conflict.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "detsched/errors.hpp"

namespace detsched {

namespace {

constexpr std::size_t kMatrixLimit = 8192;

bool intersects(const std::vector<ObjectKey>& a, const std::vector<ObjectKey>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

}  // namespace

ConflictGraph::ConflictGraph(std::size_t n) : adjacency_(n) { finalize(); }

ConflictGraph ConflictGraph::from_edges(std::size_t n,
                                        const std::vector<std::pair<TxId, TxId>>& edges) {
    ConflictGraph g;
    g.adjacency_.assign(n, {});
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw ValidationError("edge endpoint out of range");
        if (u == v) throw ValidationError("self-loop on vertex " + std::to_string(u));
        g.add_edge_unchecked(u, v);
    }
    g.finalize();
    return g;
}

void ConflictGraph::add_edge_unchecked(TxId u, TxId v) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
}

void ConflictGraph::finalize() {
    edge_count_ = 0;
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        edge_count_ += adj.size();
    }
    edge_count_ /= 2;
    const std::size_t n = adjacency_.size();
    matrix_.clear();
    words_per_row_ = 0;
    if (n <= kMatrixLimit) {
        words_per_row_ = (n + 63) / 64;
        matrix_.assign(n * words_per_row_, 0);
        for (std::size_t u = 0; u < n; ++u) {
            for (TxId v : adjacency_[u]) matrix_[u * words_per_row_ + v / 64] |= std::uint64_t{1} << (v % 64);
        }
    }
}

bool ConflictGraph::has_edge(TxId u, TxId v) const {
    if (u >= size() || v >= size()) throw ValidationError("vertex out of range");
    if (words_per_row_ != 0) return (matrix_[u * words_per_row_ + v / 64] >> (v % 64)) & 1u;
    const auto& adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<TxId, TxId>> ConflictGraph::edges() const {
    std::vector<std::pair<TxId, TxId>> out;
    out.reserve(edge_count_);
    for (TxId u = 0; u < size(); ++u) {
        for (TxId v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

bool ConflictGraph::is_independent(const std::vector<TxId>& members) const {
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (members[i] == members[j] || has_edge(members[i], members[j])) return false;
        }
    }
    return true;
}

bool conflicts(const Transaction& a, const Transaction& b) {
    if (a.id == b.id) throw ValidationError("conflict check on a transaction with itself (id " +
                                            std::to_string(a.id) + ")");
    return intersects(a.read_set, b.write_set) || intersects(a.write_set, b.read_set) ||
           intersects(a.write_set, b.write_set);
}

ConflictGraph build_conflict_graph(const Block& block) {
    require_valid_block(block);
    const std::size_t n = block.txs.size();

    // Bucket transactions per key; only transactions sharing a key can conflict.
    std::map<ObjectKey, std::pair<std::vector<TxId>, std::vector<TxId>>> touches;
    for (const auto& tx : block.txs) {
        for (const auto& k : tx.read_set) touches[k].first.push_back(tx.id);
        for (const auto& k : tx.write_set) touches[k].second.push_back(tx.id);
    }
    std::vector<std::pair<TxId, TxId>> edges;
    for (const auto& [key, rw] : touches) {
        const auto& [readers, writers] = rw;
        for (std::size_t i = 0; i < writers.size(); ++i) {
            for (std::size_t j = i + 1; j < writers.size(); ++j) edges.emplace_back(writers[i], writers[j]);
            for (TxId r : readers) {
                if (r != writers[i]) edges.emplace_back(writers[i], r);
            }
        }
    }
    for (auto& e : edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return ConflictGraph::from_edges(n, edges);
}

std::string dump_edges(const ConflictGraph& g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

}  // namespace detsched

#include "detsched/coloring.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "detsched/errors.hpp"

namespace detsched {

namespace {

std::vector<Bitset> adjacency_bits(const ConflictGraph& g) {
    std::vector<Bitset> adj(g.size(), Bitset(g.size()));
    for (TxId v = 0; v < g.size(); ++v) {
        for (TxId u : g.neighbors(v)) adj[v].set(u);
    }
    return adj;
}

class MinColoringSearch {
public:
    MinColoringSearch(const ConflictGraph& g, std::vector<TxId> order, Coloring incumbent, std::size_t lower)
        : adj_(adjacency_bits(g)),
          order_(std::move(order)),
          best_(std::move(incumbent)),
          lower_(lower),
          colors_(g.size(), 0) {}

    Coloring run() {
        if (static_cast<std::size_t>(best_.k) > lower_) {
            members_.assign(static_cast<std::size_t>(best_.k), Bitset(adj_.size()));
            descend(0, 0);
        }
        return best_;
    }

private:
    void descend(std::size_t pos, int used) {
        if (done_ || used >= best_.k) return;
        if (pos == order_.size()) {
            best_ = make_coloring(colors_);
            if (static_cast<std::size_t>(best_.k) <= lower_) done_ = true;
            return;
        }
        const TxId v = order_[pos];
        for (int c = 1; c <= std::min(used + 1, best_.k - 1) && !done_; ++c) {
            auto& m = members_[static_cast<std::size_t>(c - 1)];
            if (m.intersects(adj_[v])) continue;
            m.set(v);
            colors_[v] = c;
            descend(pos + 1, std::max(used, c));
            m.reset(v);
            colors_[v] = 0;
        }
    }

    std::vector<Bitset> adj_;
    std::vector<TxId> order_;
    Coloring best_;
    std::size_t lower_;
    std::vector<int> colors_;
    std::vector<Bitset> members_;
    bool done_ = false;
};

class MinWeightSearch {
public:
    MinWeightSearch(const ConflictGraph& g, const std::vector<Length>& lengths, std::vector<TxId> order,
                    std::uint64_t bound)
        : adj_(adjacency_bits(g)),
          lengths_(lengths),
          order_(std::move(order)),
          best_cost_(bound),
          colors_(g.size(), 0) {}

    Coloring run() {
        const std::size_t n = adj_.size();
        members_.assign(n, Bitset(n));
        heaviest_.assign(n, 0);
        descend(0, 0, 0);
        if (!found_) throw InvariantError("weighted coloring search found no coloring");
        return best_;
    }

private:
    void descend(std::size_t pos, int used, std::uint64_t cost) {
        if (cost >= best_cost_) return;
        if (pos == order_.size()) {
            best_cost_ = cost;
            best_ = make_coloring(colors_);
            found_ = true;
            return;
        }
        const TxId v = order_[pos];
        const Length w = lengths_[v];
        for (int c = 1; c <= used + 1; ++c) {
            const auto ci = static_cast<std::size_t>(c - 1);
            if (members_[ci].intersects(adj_[v])) continue;
            const Length prev = heaviest_[ci];
            const std::uint64_t next_cost = cost + (w > prev ? w - prev : 0);
            members_[ci].set(v);
            heaviest_[ci] = std::max(prev, w);
            colors_[v] = c;
            descend(pos + 1, std::max(used, c), next_cost);
            members_[ci].reset(v);
            heaviest_[ci] = prev;
            colors_[v] = 0;
        }
    }

    std::vector<Bitset> adj_;
    const std::vector<Length>& lengths_;
    std::vector<TxId> order_;
    std::uint64_t best_cost_;
    Coloring best_;
    bool found_ = false;
    std::vector<int> colors_;
    std::vector<Bitset> members_;
    std::vector<Length> heaviest_;
};

}  // namespace

std::vector<TxId> descending_degree_order(const ConflictGraph& g) {
    std::vector<TxId> order(g.size());
    std::iota(order.begin(), order.end(), TxId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](TxId a, TxId b) { return g.degree(a) > g.degree(b); });
    return order;
}

Coloring greedy_coloring(const ConflictGraph& g, const std::vector<TxId>& order) {
    const std::size_t n = g.size();
    if (order.size() != n) throw ValidationError("coloring order is not a permutation of the vertices");
    std::vector<bool> seen(n, false);
    for (TxId v : order) {
        if (v >= n || seen[v]) throw ValidationError("coloring order is not a permutation of the vertices");
        seen[v] = true;
    }
    std::vector<int> colors(n, 0);
    std::vector<std::size_t> mark(n + 2, std::numeric_limits<std::size_t>::max());
    for (TxId v : order) {
        for (TxId u : g.neighbors(v)) {
            if (colors[u] != 0) mark[static_cast<std::size_t>(colors[u])] = v;
        }
        int c = 1;
        while (mark[static_cast<std::size_t>(c)] == v) ++c;
        colors[v] = c;
    }
    return make_coloring(std::move(colors));
}

std::size_t greedy_clique_size(const ConflictGraph& g) {
    if (g.size() == 0) return 0;
    auto order = descending_degree_order(g);
    std::size_t best = 1;
    for (TxId start : order) {
        if (g.degree(start) + 1 <= best) break;
        std::vector<TxId> clique{start};
        for (TxId v : order) {
            if (v == start || !g.has_edge(start, v)) continue;
            bool all = std::all_of(clique.begin(), clique.end(), [&](TxId u) { return g.has_edge(u, v); });
            if (all) clique.push_back(v);
        }
        best = std::max(best, clique.size());
    }
    return best;
}

Coloring exact_min_coloring(const ConflictGraph& g, std::size_t cap) {
    if (g.size() > cap) {
        throw CapacityError("exact coloring is capped at " + std::to_string(cap) + " vertices (graph has " +
                            std::to_string(g.size()) + "); use greedy coloring instead");
    }
    if (g.size() == 0) return Coloring{};
    auto order = descending_degree_order(g);
    Coloring incumbent = greedy_coloring(g, order);
    MinColoringSearch search(g, std::move(order), std::move(incumbent), greedy_clique_size(g));
    return search.run();
}

std::uint64_t coloring_weight(const Coloring& c, const std::vector<Length>& lengths) {
    std::vector<Length> heaviest(static_cast<std::size_t>(c.k), 0);
    for (std::size_t v = 0; v < c.colors.size(); ++v) {
        auto& h = heaviest[static_cast<std::size_t>(c.colors[v] - 1)];
        h = std::max(h, lengths.at(v));
    }
    return std::accumulate(heaviest.begin(), heaviest.end(), std::uint64_t{0});
}

Coloring exact_min_weighted_coloring(const ConflictGraph& g, const std::vector<Length>& lengths,
                                     std::size_t cap) {
    if (g.size() > cap) {
        throw CapacityError("exact weighted coloring is capped at " + std::to_string(cap) +
                            " vertices (graph has " + std::to_string(g.size()) + ")");
    }
    if (lengths.size() != g.size()) throw ValidationError("lengths do not match graph size");
    if (g.size() == 0) return Coloring{};
    auto order = descending_degree_order(g);
    // Any legal coloring bounds the optimum; +1 keeps equal-cost optima reachable
    // so the search still returns the lexicographically first one.
    const std::uint64_t bound = coloring_weight(greedy_coloring(g, order), lengths) + 1;
    MinWeightSearch search(g, lengths, std::move(order), bound);
    return search.run();
}

Coloring convert_to_coloring(const GraphSchedule& s) {
    const std::size_t n = s.size();
    std::vector<int> colors(n, 0);
    Bitset frontier(n);
    for (TxId v = 0; v < n; ++v) {
        if (s.predecessors(v).empty()) frontier.set(v);
    }
    int level = 0;
    while (frontier.any()) {
        ++level;
        Bitset next(n);
        for (auto v = frontier.find_first(); v != Bitset::npos; v = frontier.find_next(v)) {
            colors[v] = level;
            for (TxId w : s.successors(static_cast<TxId>(v))) next.set(w);
        }
        frontier = std::move(next);
    }
    return make_coloring(std::move(colors));
}

Coloring convert_to_coloring(const GraphSchedule& s, const ConflictGraph& g) {
    require_valid_schedule(s, g);
    Coloring c = convert_to_coloring(s);
    if (!is_legal_coloring(c, g)) throw InvariantError("schedule-derived coloring is not legal");
    return c;
}

}  // namespace detsched

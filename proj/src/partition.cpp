#include "detsched/partition.hpp"

#include <algorithm>
#include <sstream>

#include "detsched/conflict.hpp"
#include "detsched/errors.hpp"

namespace detsched {

Coloring make_coloring(std::vector<int> colors) {
    int k = 0;
    for (int c : colors) {
        if (c < 1) throw ValidationError("colors are 1-based");
        k = std::max(k, c);
    }
    std::vector<bool> used(static_cast<std::size_t>(k) + 1, false);
    for (int c : colors) used[static_cast<std::size_t>(c)] = true;
    for (int c = 1; c <= k; ++c) {
        if (!used[static_cast<std::size_t>(c)]) throw ValidationError("color " + std::to_string(c) + " is unused");
    }
    return Coloring{std::move(colors), k};
}

bool is_legal_coloring(const Coloring& c, const ConflictGraph& g) {
    if (c.colors.size() != g.size()) return false;
    for (auto [u, v] : g.edges()) {
        if (c.colors[u] == c.colors[v]) return false;
    }
    return true;
}

Partition partition_from_coloring(const Coloring& c) {
    Partition p(static_cast<std::size_t>(c.k));
    for (TxId v = 0; v < c.colors.size(); ++v) p.at(static_cast<std::size_t>(c.colors[v] - 1)).push_back(v);
    return p;
}

Coloring coloring_from_partition(const Partition& p, std::size_t n) {
    std::vector<int> colors(n, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (TxId v : p[i]) {
            if (v >= n) throw ValidationError("partition member " + std::to_string(v) + " out of range");
            if (colors[v] != 0) throw ValidationError("vertex " + std::to_string(v) + " appears twice in partition");
            colors[v] = static_cast<int>(i) + 1;
        }
    }
    for (TxId v = 0; v < n; ++v) {
        if (colors[v] == 0) throw ValidationError("vertex " + std::to_string(v) + " missing from partition");
    }
    return make_coloring(std::move(colors));
}

void require_legal_partition(const Partition& p, const ConflictGraph& g) {
    for (const auto& set : p) {
        if (set.empty()) throw ValidationError("partition contains an empty set");
    }
    (void)coloring_from_partition(p, g.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& set = p[i];
        for (std::size_t a = 0; a < set.size(); ++a) {
            for (std::size_t b = a + 1; b < set.size(); ++b) {
                if (g.has_edge(set[a], set[b])) {
                    throw ValidationError("set " + std::to_string(i) + " is not conflict-free: " +
                                          std::to_string(set[a]) + " conflicts with " +
                                          std::to_string(set[b]));
                }
            }
        }
    }
}

std::string dump_coloring(const Coloring& c) {
    std::ostringstream out;
    for (std::size_t v = 0; v < c.colors.size(); ++v) out << v << ' ' << c.colors[v] << '\n';
    return out.str();
}

std::string dump_levels(const Partition& p) {
    std::ostringstream out;
    for (const auto& set : p) {
        for (std::size_t i = 0; i < set.size(); ++i) out << (i ? " " : "") << set[i];
        out << '\n';
    }
    return out.str();
}

}  // namespace detsched

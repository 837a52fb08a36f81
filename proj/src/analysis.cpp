#include "detsched/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "detsched/block_io.hpp"
#include "detsched/coloring.hpp"
#include "detsched/errors.hpp"
#include "detsched/rng.hpp"

namespace detsched {

namespace {

using Mask = std::uint32_t;

std::vector<Mask> neighbor_masks(const ConflictGraph& g) {
    std::vector<Mask> m(g.size(), 0);
    for (TxId v = 0; v < g.size(); ++v) {
        for (TxId u : g.neighbors(v)) m[v] |= Mask{1} << u;
    }
    return m;
}

std::vector<TxId> members(Mask m) {
    std::vector<TxId> out;
    for (TxId v = 0; m != 0; ++v, m >>= 1) {
        if (m & 1) out.push_back(v);
    }
    return out;
}

class OracleSearch {
public:
    OracleSearch(const ConflictGraph& g, const std::vector<Length>& lengths, std::uint64_t upper)
        : n_(g.size()), nbr_(neighbor_masks(g)), len_(lengths), best_(upper + 1), finish_(n_, 0) {
        const Mask full = n_ == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n_) - 1);
        indep_.assign(std::size_t{full} + 1, false);
        indep_[0] = true;
        for (Mask m = 1; m <= full && m != 0; ++m) {
            const int low = std::countr_zero(m);
            const Mask rest = m & (m - 1);
            indep_[m] = indep_[rest] && (nbr_[static_cast<std::size_t>(low)] & rest) == 0;
            if (m == full) break;
        }
        full_ = full;
    }

    void run() { descend(0, 0, 0); }

    std::uint64_t best() const { return best_; }
    const std::vector<Mask>& best_levels() const { return best_levels_; }

private:
    void descend(Mask placed, Mask prev, std::uint64_t cur) {
        if (placed == full_) {
            if (cur < best_) {
                best_ = cur;
                best_levels_ = levels_;
            }
            return;
        }
        const Mask rem = full_ & ~placed;
        // Every remaining vertex finishes no earlier than its own length on
        // top of its latest placed neighbor.
        std::uint64_t lb = cur;
        for (Mask r = rem; r != 0; r &= r - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(r));
            lb = std::max(lb, len_[v] + placed_max(v, placed));
        }
        if (lb >= best_) return;

        Mask prev_nbrs = 0;
        for (Mask r = prev; r != 0; r &= r - 1) prev_nbrs |= nbr_[static_cast<std::size_t>(std::countr_zero(r))];

        // Submasks of rem in ascending order.
        for (Mask level = (0 - rem) & rem; level != 0; level = (level - rem) & rem) {
            if (!indep_[level]) continue;
            if (prev != 0 && (level & prev_nbrs) == 0) continue;
            std::uint64_t next = cur;
            for (Mask r = level; r != 0; r &= r - 1) {
                const auto v = static_cast<std::size_t>(std::countr_zero(r));
                finish_[v] = len_[v] + placed_max(v, placed);
                next = std::max(next, finish_[v]);
            }
            if (next >= best_) continue;
            levels_.push_back(level);
            descend(placed | level, level, next);
            levels_.pop_back();
        }
    }

    std::uint64_t placed_max(std::size_t v, Mask placed) const {
        std::uint64_t m = 0;
        for (Mask r = nbr_[v] & placed; r != 0; r &= r - 1) {
            m = std::max(m, finish_[static_cast<std::size_t>(std::countr_zero(r))]);
        }
        return m;
    }

    std::size_t n_;
    std::vector<Mask> nbr_;
    const std::vector<Length>& len_;
    std::vector<bool> indep_;
    Mask full_ = 0;
    std::uint64_t best_;
    std::vector<Mask> best_levels_;
    std::vector<Mask> levels_;
    std::vector<std::uint64_t> finish_;
};

bool acyclic(std::size_t n, const std::vector<std::pair<TxId, TxId>>& edges) {
    std::vector<Mask> preds(n, 0);
    for (auto [u, v] : edges) preds[v] |= Mask{1} << u;
    Mask done = 0;
    for (std::size_t round = 0; round < n; ++round) {
        Mask ready = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!(done >> v & 1) && (preds[v] & ~done) == 0) ready |= Mask{1} << v;
        }
        if (ready == 0) return false;
        done |= ready;
        if (std::popcount(done) == static_cast<int>(n)) return true;
    }
    return std::popcount(done) == static_cast<int>(n);
}

std::string describe(const Partition& p) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < p.size(); ++i) {
        out << (i ? " | " : "");
        for (std::size_t j = 0; j < p[i].size(); ++j) out << (j ? " " : "") << p[i][j];
    }
    out << ']';
    return out.str();
}

Partition permuted(const Partition& p, const std::vector<int>& perm0) {
    Partition out;
    out.reserve(p.size());
    for (int i : perm0) out.push_back(p[static_cast<std::size_t>(i)]);
    return out;
}

Block block_with_lengths(const ConflictGraph& g, const std::vector<Length>& lengths) {
    Block b = transform_graph_to_block(g, 1);
    for (auto& tx : b.txs) tx.length = lengths[tx.id];
    return b;
}

}  // namespace

std::uint64_t ordered_partition_latency(const Partition& levels, const ConflictGraph& g,
                                        const std::vector<Length>& lengths) {
    require_legal_partition(levels, g);
    if (lengths.size() != g.size()) throw ValidationError("lengths do not match graph size");
    std::vector<std::size_t> pos(g.size(), 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        for (TxId v : levels[i]) pos[v] = i;
    }
    std::vector<std::uint64_t> finish(g.size(), 0);
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        for (TxId v : levels[i]) {
            std::uint64_t start = 0;
            for (TxId u : g.neighbors(v)) {
                if (pos[u] < i) start = std::max(start, finish[u]);
            }
            finish[v] = start + lengths[v];
            best = std::max(best, finish[v]);
        }
    }
    return best;
}

OracleResult optimal_schedule_oracle(const Block& block, std::size_t cap) {
    const ConflictGraph g = build_conflict_graph(block);
    const std::size_t n = g.size();
    if (n > cap || n > 24) {
        throw CapacityError("optimal schedule oracle is capped at " + std::to_string(std::min<std::size_t>(cap, 24)) +
                            " transactions (block has " + std::to_string(n) + ")");
    }
    const auto lengths = lengths_of(block);
    OracleResult result;
    if (n == 0) {
        result.schedule = GraphSchedule(0, {});
        return result;
    }
    const Coloring greedy = greedy_coloring(g, descending_degree_order(g));
    const std::uint64_t upper = ordered_partition_latency(size_descending_color_order(greedy), g, lengths);
    OracleSearch search(g, lengths, upper);
    search.run();
    for (Mask m : search.best_levels()) result.levels.push_back(members(m));
    result.schedule = level_schedule(result.levels, g);
    result.optimal_latency = latency(result.schedule, lengths);
    if (result.optimal_latency != search.best()) {
        throw InvariantError("oracle level schedule latency disagrees with the search");
    }
    return result;
}

std::uint64_t orientation_oracle(const Block& block, std::size_t edge_cap) {
    const ConflictGraph g = build_conflict_graph(block);
    const auto edges = g.edges();
    if (edges.size() > edge_cap || edges.size() > 30 || g.size() > 32) {
        throw CapacityError("orientation oracle is capped at " + std::to_string(std::min<std::size_t>(edge_cap, 30)) +
                            " conflict edges (block has " + std::to_string(edges.size()) + ")");
    }
    const auto lengths = lengths_of(block);
    if (g.size() == 0) return 0;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::pair<TxId, TxId>> oriented(edges.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            auto [u, v] = edges[e];
            oriented[e] = (mask >> e & 1) ? std::make_pair(v, u) : std::make_pair(u, v);
        }
        if (!acyclic(g.size(), oriented)) continue;
        const GraphSchedule s(g.size(), oriented);
        const Coloring c = convert_to_coloring(s, g);
        best = std::min(best, latency(level_schedule(ascending_color_order(c), g), lengths));
    }
    return best;
}

Block transform_graph_to_block(const ConflictGraph& g, Length c) {
    if (c < 1) throw ValidationError("transaction length must be >= 1");
    std::vector<std::vector<ObjectKey>> keys(g.size());
    for (auto [u, v] : g.edges()) {
        auto key = "e" + std::to_string(u) + "_" + std::to_string(v);
        keys[u].push_back(key);
        keys[v].push_back(key);
    }
    Block b;
    for (TxId v = 0; v < g.size(); ++v) {
        b.txs.push_back(make_transaction(v, {}, keys[v], c, {ProgramKind::SleepOnly, 0}));
    }
    return b;
}

std::size_t est_longest_path(const ConflictGraph& g, const std::vector<TxId>& order) {
    const std::size_t n = g.size();
    if (order.size() != n) throw ValidationError("order is not a permutation of the vertices");
    std::vector<std::size_t> pos(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] >= n || pos[order[i]] != n) throw ValidationError("order is not a permutation of the vertices");
        pos[order[i]] = i;
    }
    std::vector<std::size_t> l(n, 0);
    std::size_t best = 0;
    for (TxId v : order) {
        for (TxId u : g.neighbors(v)) {
            if (pos[u] < pos[v]) l[v] = std::max(l[v], l[u] + 1);
        }
        best = std::max(best, l[v]);
    }
    return best;
}

std::size_t est_longest_path(const ConflictGraph& g) {
    std::vector<TxId> order(g.size());
    std::iota(order.begin(), order.end(), TxId{0});
    return est_longest_path(g, order);
}

std::size_t est_chromatic(const ConflictGraph& g) {
    if (g.size() == 0) return 0;
    return static_cast<std::size_t>(greedy_coloring(g, descending_degree_order(g)).k);
}

ConflictGraph gnp_graph(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in [0, 1]");
    Rng rng(seed);
    std::vector<std::pair<TxId, TxId>> edges;
    for (TxId u = 0; u < n; ++u) {
        for (TxId v = u + 1; v < n; ++v) {
            if (rng.unit() < p) edges.emplace_back(u, v);
        }
    }
    return ConflictGraph::from_edges(n, edges);
}

RatioSample ratio_sample(const ConflictGraph& g, double p, const std::vector<TxId>& order) {
    RatioSample s;
    s.n = g.size();
    s.p = p;
    s.est_longest_path_vertices = est_longest_path(g, order) + 1;
    s.est_chromatic = std::max<std::size_t>(est_chromatic(g), 1);
    s.ratio = static_cast<double>(s.est_longest_path_vertices) / static_cast<double>(s.est_chromatic);
    return s;
}

std::vector<RatioCell> vulnerability_study(const std::vector<std::size_t>& ns, const std::vector<double>& ps,
                                           std::size_t samples, std::uint64_t seed, StudyOptions options) {
    if (samples == 0) throw ValidationError("samples must be >= 1");
    for (double p : ps) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in [0, 1]");
    }
    const std::size_t cells = ns.size() * ps.size();
    std::vector<double> ratios(cells * samples, 0.0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t = next.fetch_add(1); t < ratios.size(); t = next.fetch_add(1)) {
            const std::size_t cell = t / samples;
            const std::size_t s = t % samples;
            const std::size_t n = ns[cell / ps.size()];
            const std::size_t pi = cell % ps.size();
            const std::uint64_t sample_seed = derive_seed(seed, {n, pi, s});
            const ConflictGraph g = gnp_graph(n, ps[pi], sample_seed);
            std::vector<TxId> order(n);
            std::iota(order.begin(), order.end(), TxId{0});
            if (options.random_order) {
                Rng rng(derive_seed(sample_seed, {1}));
                rng.shuffle(order);
            }
            ratios[t] = ratio_sample(g, ps[pi], order).ratio;
        }
    };
    const std::size_t threads = std::max<std::size_t>(options.threads, 1);
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<RatioCell> out;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        RatioCell c;
        c.n = ns[cell / ps.size()];
        c.p = ps[cell % ps.size()];
        c.samples = samples;
        c.seed = seed;
        c.min_ratio = std::numeric_limits<double>::infinity();
        c.max_ratio = -std::numeric_limits<double>::infinity();
        double sum = 0;
        for (std::size_t s = 0; s < samples; ++s) {
            const double r = ratios[cell * samples + s];
            sum += r;
            c.min_ratio = std::min(c.min_ratio, r);
            c.max_ratio = std::max(c.max_ratio, r);
        }
        c.mean_ratio = sum / static_cast<double>(samples);
        out.push_back(c);
    }
    return out;
}

std::string ratio_csv(const std::vector<RatioCell>& cells) {
    std::string out = "n,p,samples,mean_ratio,min_ratio,max_ratio,seed\n";
    char line[256];
    for (const auto& c : cells) {
        std::snprintf(line, sizeof line, "%zu,%g,%zu,%.6f,%.6f,%.6f,%llu\n", c.n, c.p, c.samples, c.mean_ratio,
                      c.min_ratio, c.max_ratio, static_cast<unsigned long long>(c.seed));
        out += line;
    }
    return out;
}

std::uint64_t alpha_bound(std::uint64_t ch, std::uint64_t M) {
    if (M < 2) throw ValidationError("alpha bound needs M >= 2");
    if (ch < M) throw ValidationError("alpha bound needs ch >= M");
    const std::uint64_t num = ch - (M - 1);
    const std::uint64_t den = M - 1;
    return (num + den - 1) / den;
}

std::vector<Partition> all_colorings_with(const ConflictGraph& g, std::size_t k) {
    const std::size_t n = g.size();
    if (n > 32) throw CapacityError("coloring enumeration is capped at 32 vertices");
    std::vector<Partition> out;
    if (k == 0 || k > n) return out;
    const auto nbr = neighbor_masks(g);
    std::vector<Mask> classes;
    auto rec = [&](auto&& self, TxId v) -> void {
        if (v == n) {
            if (classes.size() == k) {
                Partition p;
                for (Mask m : classes) p.push_back(members(m));
                out.push_back(std::move(p));
            }
            return;
        }
        // Not enough vertices left to open the missing classes.
        if (n - v < k - classes.size()) return;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (classes[c] & nbr[v]) continue;
            classes[c] |= Mask{1} << v;
            self(self, v + 1);
            classes[c] &= ~(Mask{1} << v);
        }
        if (classes.size() < k) {
            classes.push_back(Mask{1} << v);
            self(self, v + 1);
            classes.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

CounterexampleReport hetero_counterexample_search(std::size_t n_max, std::size_t trials, std::uint64_t seed,
                                                  bool homogeneous) {
    if (n_max > kDefaultOracleCap) {
        throw CapacityError("n_max is capped at the oracle cap " + std::to_string(kDefaultOracleCap));
    }
    if (n_max < 3) throw ValidationError("n_max must be >= 3");
    static const std::array<Length, 4> choices{1, 10, 100, 1000};
    constexpr std::size_t kMaxPermutedColors = 5;

    CounterexampleReport report;
    for (std::size_t t = 0; t < trials; ++t) {
        ++report.trials;
        Rng rng(derive_seed(seed, {t}));
        const auto n = static_cast<std::size_t>(rng.uniform(3, n_max));
        const double p = 0.2 + 0.5 * rng.unit();
        const ConflictGraph g = gnp_graph(n, p, rng.next());
        std::vector<Length> lengths(n, 1);
        if (!homogeneous) {
            for (auto& l : lengths) l = choices[static_cast<std::size_t>(rng.uniform(0, choices.size() - 1))];
        }
        const Block block = block_with_lengths(g, lengths);
        const std::uint64_t opt = optimal_schedule_oracle(block).optimal_latency;
        const auto chi = static_cast<std::size_t>(exact_min_coloring(g).k);
        const auto minimal = all_colorings_with(g, chi);

        std::vector<std::uint64_t> lat;
        for (const auto& c : minimal) lat.push_back(ordered_partition_latency(c, g, lengths));
        const auto [lo, hi] = std::minmax_element(lat.begin(), lat.end());

        if (*lo != *hi) {
            ++report.counts[0];
            if (!report.witnesses[0]) {
                const auto i = static_cast<std::size_t>(lo - lat.begin());
                const auto j = static_cast<std::size_t>(hi - lat.begin());
                std::ostringstream d;
                d << "minimal colorings " << describe(minimal[i]) << " latency " << *lo << " and "
                  << describe(minimal[j]) << " latency " << *hi << "; optimum " << opt;
                report.witnesses[0] = Witness{block, d.str()};
            }
        }

        if (chi > kMaxPermutedColors) continue;
        bool reach_opt = false;
        bool b_found = false;
        std::string b_detail;
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            std::vector<int> perm(chi);
            std::iota(perm.begin(), perm.end(), 0);
            std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
            std::optional<std::pair<std::vector<int>, std::uint64_t>> changed;
            do {
                const auto l = ordered_partition_latency(permuted(minimal[i], perm), g, lengths);
                best = std::min(best, l);
                if (l != lat[i] && !changed) changed.emplace(perm, l);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (best == opt) reach_opt = true;
            if (!b_found && (changed || best > opt)) {
                b_found = true;
                std::ostringstream d;
                d << "minimal coloring " << describe(minimal[i]) << " latency " << lat[i];
                if (changed) d << ", reordered " << describe(permuted(minimal[i], changed->first)) << " latency "
                               << changed->second;
                d << "; best reordering " << best << ", optimum " << opt;
                b_detail = d.str();
            }
        }
        if (b_found) {
            ++report.counts[1];
            if (!report.witnesses[1]) report.witnesses[1] = Witness{block, b_detail};
        }

        const Coloring weighted = exact_min_weighted_coloring(g, lengths);
        const auto wl = ordered_partition_latency(ascending_color_order(weighted), g, lengths);
        if (wl > opt && reach_opt) {
            ++report.counts[2];
            if (!report.witnesses[2]) {
                std::ostringstream d;
                d << "minimal weighted coloring " << describe(ascending_color_order(weighted)) << " weight "
                  << coloring_weight(weighted, lengths) << " latency " << wl << "; optimum " << opt
                  << " reached by a reordered " << chi << "-coloring";
                report.witnesses[2] = Witness{block, d.str()};
            }
        }
    }
    return report;
}

std::string format_report(const CounterexampleReport& report) {
    std::ostringstream out;
    out << "trials " << report.trials << '\n';
    const char names[3] = {'a', 'b', 'c'};
    for (std::size_t i = 0; i < 3; ++i) {
        out << "phenomenon " << names[i] << ": ";
        if (!report.witnesses[i]) {
            out << "none found\n";
            continue;
        }
        out << report.counts[i] << " blocks\n";
        out << "  " << report.witnesses[i]->detail << '\n';
        out << "  " << serialize_block(report.witnesses[i]->block) << '\n';
    }
    return out.str();
}

std::optional<ReorderWitness> reorder_witness_search(std::size_t n_max, std::size_t trials, std::uint64_t seed) {
    if (n_max < 3) throw ValidationError("n_max must be >= 3");
    if (n_max > 32) throw CapacityError("n_max is capped at 32");
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, {t}));
        const auto n = static_cast<std::size_t>(rng.uniform(3, n_max));
        const ConflictGraph g = gnp_graph(n, 0.2 + 0.5 * rng.unit(), rng.next());
        const std::vector<Length> lengths(n, 1);

        // Random legal partition, biased toward opening extra classes.
        std::vector<TxId> order(n);
        std::iota(order.begin(), order.end(), TxId{0});
        rng.shuffle(order);
        std::vector<int> colors(n, 0);
        int k = 0;
        for (TxId v : order) {
            std::vector<int> legal;
            for (int c = 1; c <= k; ++c) {
                bool ok = std::none_of(g.neighbors(v).begin(), g.neighbors(v).end(),
                                       [&](TxId u) { return colors[u] == c; });
                if (ok) legal.push_back(c);
            }
            if (legal.empty() || rng.bernoulli(0.3)) {
                colors[v] = ++k;
            } else {
                colors[v] = legal[static_cast<std::size_t>(rng.uniform(0, legal.size() - 1))];
            }
        }
        if (k <= exact_min_coloring(g).k || k > 7) continue;
        const Partition levels = ascending_color_order(make_coloring(colors));
        const auto before = ordered_partition_latency(levels, g, lengths);
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 1);
        while (std::next_permutation(perm.begin(), perm.end())) {
            const Partition moved = reorder_partition(levels, perm);
            const auto after = ordered_partition_latency(moved, g, lengths);
            if (after != before) {
                return ReorderWitness{transform_graph_to_block(g, 1), levels, perm, before, after};
            }
        }
    }
    return std::nullopt;
}

std::vector<ConflictGraph> connected_graph_catalog(std::size_t max_n) {
    if (max_n > 6) throw CapacityError("graph catalog is capped at 6 vertices");
    std::vector<ConflictGraph> out;
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<std::pair<TxId, TxId>> pairs;
        for (TxId u = 0; u < n; ++u) {
            for (TxId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
        }
        // index of pair (u, v) in `pairs`
        std::vector<std::vector<std::size_t>> index(n, std::vector<std::size_t>(n, 0));
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            index[pairs[e].first][pairs[e].second] = e;
            index[pairs[e].second][pairs[e].first] = e;
        }
        std::vector<std::vector<TxId>> perms;
        std::vector<TxId> perm(n);
        std::iota(perm.begin(), perm.end(), TxId{0});
        do {
            perms.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));

        std::set<std::uint32_t> canon;
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << pairs.size()); ++mask) {
            std::vector<Mask> nbr(n, 0);
            for (std::size_t e = 0; e < pairs.size(); ++e) {
                if (mask >> e & 1) {
                    nbr[pairs[e].first] |= Mask{1} << pairs[e].second;
                    nbr[pairs[e].second] |= Mask{1} << pairs[e].first;
                }
            }
            Mask seen = 1, frontier = 1;
            while (frontier != 0) {
                Mask next = 0;
                for (Mask r = frontier; r != 0; r &= r - 1) next |= nbr[static_cast<std::size_t>(std::countr_zero(r))];
                frontier = next & ~seen;
                seen |= next;
            }
            if (std::popcount(seen) != static_cast<int>(n)) continue;
            std::uint32_t best = mask;
            for (const auto& p : perms) {
                std::uint32_t m = 0;
                for (std::size_t e = 0; e < pairs.size(); ++e) {
                    if (mask >> e & 1) m |= std::uint32_t{1} << index[p[pairs[e].first]][p[pairs[e].second]];
                }
                best = std::min(best, m);
            }
            canon.insert(best);
        }
        for (std::uint32_t mask : canon) {
            std::vector<std::pair<TxId, TxId>> edges;
            for (std::size_t e = 0; e < pairs.size(); ++e) {
                if (mask >> e & 1) edges.push_back(pairs[e]);
            }
            out.push_back(ConflictGraph::from_edges(n, edges));
        }
    }
    return out;
}

}  // namespace detsched

#include "detsched/workload.hpp"

#include <algorithm>

#include <json.hpp>

#include "detsched/analysis.hpp"
#include "detsched/digest.hpp"
#include "detsched/errors.hpp"
#include "detsched/rng.hpp"

namespace detsched {

using json = nlohmann::json;

namespace {

std::vector<ObjectKey> sample_keys(Rng& rng, std::size_t universe, SizeRange size) {
    const auto count = static_cast<std::size_t>(rng.uniform(size.min, size.max));
    std::vector<std::size_t> pool(universe);
    for (std::size_t i = 0; i < universe; ++i) pool[i] = i;
    std::vector<ObjectKey> keys;
    for (std::size_t i = 0; i < count; ++i) {
        auto j = static_cast<std::size_t>(rng.uniform(i, universe - 1));
        std::swap(pool[i], pool[j]);
        keys.push_back("k" + std::to_string(pool[i]));
    }
    return keys;
}

Length sample_length(Rng& rng, const WorkloadSpec& spec) {
    switch (spec.length_mode) {
        case LengthMode::Homogeneous: return spec.c;
        case LengthMode::EpsilonHomogeneous: return rng.uniform(spec.c, spec.c + spec.epsilon);
        case LengthMode::Heterogeneous:
            return spec.choices[static_cast<std::size_t>(rng.uniform(0, spec.choices.size() - 1))];
    }
    return spec.c;
}

TxProgram sample_program(Rng& rng) {
    const auto roll = rng.uniform(0, 9);
    const auto value = static_cast<Value>(rng.uniform(0, 99));
    if (roll < 6) return {ProgramKind::SumAndAdd, value};
    if (roll < 9) return {ProgramKind::WriteConst, value};
    return {ProgramKind::SleepOnly, 0};
}

const char* to_string(LengthMode m) {
    switch (m) {
        case LengthMode::Homogeneous: return "homogeneous";
        case LengthMode::EpsilonHomogeneous: return "epsilon-homogeneous";
        case LengthMode::Heterogeneous: return "heterogeneous";
    }
    return "homogeneous";
}

const char* to_string(BlockShape s) {
    switch (s) {
        case BlockShape::RandomKeys: return "random";
        case BlockShape::Chain: return "chain";
        case BlockShape::Gnp: return "gnp";
    }
    return "random";
}

SizeRange range_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("size ranges are [min, max]");
    return SizeRange{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

WorkloadSpec spec_from_json(const json& j) {
    WorkloadSpec s;
    s.n_txs = j.at("n_txs").get<std::size_t>();
    s.key_universe = j.value("key_universe", s.key_universe);
    if (j.contains("read_size")) s.read_size = range_from_json(j["read_size"]);
    if (j.contains("write_size")) s.write_size = range_from_json(j["write_size"]);
    if (j.contains("lengths")) {
        const auto& l = j["lengths"];
        const auto mode = l.value("mode", std::string("homogeneous"));
        if (mode == "homogeneous") {
            s.length_mode = LengthMode::Homogeneous;
        } else if (mode == "epsilon-homogeneous") {
            s.length_mode = LengthMode::EpsilonHomogeneous;
        } else if (mode == "heterogeneous") {
            s.length_mode = LengthMode::Heterogeneous;
        } else {
            throw ValidationError("unknown length mode '" + mode + "'");
        }
        s.c = l.value("c", s.c);
        s.epsilon = l.value("epsilon", s.epsilon);
        if (l.contains("choices")) s.choices = l["choices"].get<std::vector<Length>>();
    }
    const auto shape = j.value("shape", std::string("random"));
    if (shape == "random") {
        s.shape = BlockShape::RandomKeys;
    } else if (shape == "chain") {
        s.shape = BlockShape::Chain;
    } else if (shape == "gnp") {
        s.shape = BlockShape::Gnp;
    } else {
        throw ValidationError("unknown block shape '" + shape + "'");
    }
    s.conflict_p = j.value("conflict_p", s.conflict_p);
    s.seed = j.value("seed", s.seed);
    return s;
}

json spec_to_json(const WorkloadSpec& s) {
    return json{{"n_txs", s.n_txs},
                {"key_universe", s.key_universe},
                {"read_size", {s.read_size.min, s.read_size.max}},
                {"write_size", {s.write_size.min, s.write_size.max}},
                {"lengths", {{"mode", to_string(s.length_mode)}, {"c", s.c}, {"epsilon", s.epsilon},
                             {"choices", s.choices}}},
                {"shape", to_string(s.shape)},
                {"conflict_p", s.conflict_p},
                {"seed", s.seed}};
}

}  // namespace

void require_feasible(const WorkloadSpec& spec) {
    if (spec.c < 1) throw ValidationError("length constant c must be >= 1");
    if (spec.length_mode == LengthMode::Heterogeneous) {
        if (spec.choices.empty()) throw ValidationError("heterogeneous lengths need at least one choice");
        if (std::find(spec.choices.begin(), spec.choices.end(), Length{0}) != spec.choices.end()) {
            throw ValidationError("length choices must be positive");
        }
    }
    if (spec.shape == BlockShape::RandomKeys) {
        for (const auto* r : {&spec.read_size, &spec.write_size}) {
            if (r->min > r->max) throw ValidationError("set size range has min > max");
            if (r->max > spec.key_universe) throw ValidationError("set size exceeds key universe");
        }
        if (spec.n_txs > 0 && spec.key_universe == 0 && (spec.read_size.max > 0 || spec.write_size.max > 0)) {
            throw ValidationError("empty key universe");
        }
    }
    if (spec.shape == BlockShape::Gnp && !(spec.conflict_p >= 0.0 && spec.conflict_p <= 1.0)) {
        throw ValidationError("conflict_p must lie in [0, 1]");
    }
}

Block gen_block(const WorkloadSpec& spec, std::uint64_t seq, const std::string& prev_hash) {
    require_feasible(spec);
    Rng rng(spec.seed);
    Block block;
    block.seq = seq;
    block.prev_hash = prev_hash;
    const std::size_t n = spec.n_txs;
    switch (spec.shape) {
        case BlockShape::RandomKeys:
            for (std::size_t i = 0; i < n; ++i) {
                auto reads = sample_keys(rng, spec.key_universe, spec.read_size);
                auto writes = sample_keys(rng, spec.key_universe, spec.write_size);
                Length len = sample_length(rng, spec);
                block.txs.push_back(make_transaction(static_cast<TxId>(i), std::move(reads), std::move(writes),
                                                     len, sample_program(rng)));
            }
            break;
        case BlockShape::Chain:
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<ObjectKey> keys{"x" + std::to_string(i), "x" + std::to_string(i + 1)};
                Length len = sample_length(rng, spec);
                block.txs.push_back(make_transaction(static_cast<TxId>(i), keys, keys, len, {ProgramKind::SumAndAdd, 1}));
            }
            break;
        case BlockShape::Gnp: {
            auto g = gnp_graph(n, spec.conflict_p, rng.next());
            std::vector<std::vector<ObjectKey>> keys(n);
            for (auto [u, v] : g.edges()) {
                auto key = "e" + std::to_string(u) + "_" + std::to_string(v);
                keys[u].push_back(key);
                keys[v].push_back(key);
            }
            for (std::size_t i = 0; i < n; ++i) {
                Length len = sample_length(rng, spec);
                auto value = static_cast<Value>(rng.uniform(0, 99));
                block.txs.push_back(
                    make_transaction(static_cast<TxId>(i), keys[i], keys[i], len, {ProgramKind::SumAndAdd, value}));
            }
            break;
        }
    }
    return block;
}

Block chain_block(std::size_t n, Length length) {
    WorkloadSpec spec;
    spec.n_txs = n;
    spec.shape = BlockShape::Chain;
    spec.c = length;
    return gen_block(spec);
}

std::vector<Block> gen_stream(const std::vector<WorkloadSpec>& specs, const std::string& initial_prev_hash) {
    std::vector<Block> blocks;
    std::string prev = initial_prev_hash;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        blocks.push_back(gen_block(specs[i], i, prev));
        prev = block_hash(blocks.back());
    }
    return blocks;
}

bool is_epsilon_homogeneous(const Block& block, Length epsilon) {
    if (block.txs.empty()) return true;
    auto [lo, hi] = std::minmax_element(block.txs.begin(), block.txs.end(),
                                        [](const auto& a, const auto& b) { return a.length < b.length; });
    return hi->length - lo->length <= epsilon;
}

WorkloadSpec parse_workload_spec(const std::string& json_text) {
    try {
        return spec_from_json(json::parse(json_text));
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0);
    }
}

std::vector<WorkloadSpec> parse_workload_specs(const std::string& json_text) {
    try {
        auto j = json::parse(json_text);
        std::vector<WorkloadSpec> specs;
        if (j.is_array()) {
            for (const auto& e : j) specs.push_back(spec_from_json(e));
        } else {
            specs.push_back(spec_from_json(j));
        }
        return specs;
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0);
    }
}

std::string serialize_workload_spec(const WorkloadSpec& spec) { return spec_to_json(spec).dump(); }

}  // namespace detsched

#include "detsched/model.hpp"

#include <algorithm>

#include "detsched/errors.hpp"

namespace detsched {

const char* to_string(ProgramKind kind) {
    switch (kind) {
        case ProgramKind::WriteConst: return "WRITE_CONST";
        case ProgramKind::SumAndAdd: return "SUM_AND_ADD";
        case ProgramKind::SleepOnly: return "SLEEP_ONLY";
    }
    throw ValidationError("unknown program kind");
}

ProgramKind program_kind_from_string(const std::string& name) {
    if (name == "WRITE_CONST") return ProgramKind::WriteConst;
    if (name == "SUM_AND_ADD") return ProgramKind::SumAndAdd;
    if (name == "SLEEP_ONLY") return ProgramKind::SleepOnly;
    throw ValidationError("unknown program kind '" + name + "'");
}

namespace {

std::vector<ObjectKey> canonical(std::vector<ObjectKey> keys) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

}  // namespace

Transaction make_transaction(TxId id, std::vector<ObjectKey> reads, std::vector<ObjectKey> writes,
                             Length length, TxProgram program) {
    return Transaction{id, canonical(std::move(reads)), canonical(std::move(writes)), length,
                       program};
}

Value GlobalState::get(const ObjectKey& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second;
}

void GlobalState::apply(const ValueMap& changes) {
    for (const auto& [k, v] : changes) entries[k] = v;
}

ValueMap run_program(const Transaction& tx, const ValueMap& reads) {
    ValueMap out;
    switch (tx.program.kind) {
        case ProgramKind::WriteConst:
            for (const auto& key : tx.write_set) out[key] = tx.program.const_value;
            return out;
        case ProgramKind::SumAndAdd: {
            std::uint64_t sum = static_cast<std::uint64_t>(tx.program.const_value);
            for (const auto& key : tx.read_set) {
                auto it = reads.find(key);
                if (it != reads.end()) sum += static_cast<std::uint64_t>(it->second);
            }
            for (const auto& key : tx.write_set) out[key] = static_cast<Value>(sum);
            return out;
        }
        case ProgramKind::SleepOnly:
            return out;
    }
    throw ValidationError("unknown program kind");
}

std::optional<std::string> check_block(const Block& block) {
    const std::size_t n = block.txs.size();
    std::vector<bool> seen(n, false);
    for (const auto& tx : block.txs) {
        if (tx.id >= n) {
            return "transaction id " + std::to_string(tx.id) + " out of range for block of " +
                   std::to_string(n);
        }
        if (seen[tx.id]) return "duplicate transaction id " + std::to_string(tx.id);
        seen[tx.id] = true;
        if (tx.length < 1) return "transaction " + std::to_string(tx.id) + " has zero length";
        for (const auto* set : {&tx.read_set, &tx.write_set}) {
            for (const auto& key : *set) {
                if (key.empty()) return "transaction " + std::to_string(tx.id) + " uses an empty key";
            }
            if (!std::is_sorted(set->begin(), set->end()) ||
                std::adjacent_find(set->begin(), set->end()) != set->end()) {
                return "transaction " + std::to_string(tx.id) + " key set not canonical";
            }
        }
    }
    return std::nullopt;
}

void require_valid_block(const Block& block) {
    if (auto problem = check_block(block)) throw ValidationError(*problem);
}

std::vector<Length> lengths_of(const Block& block) {
    std::vector<Length> lengths(block.txs.size(), 1);
    for (const auto& tx : block.txs) lengths.at(tx.id) = tx.length;
    return lengths;
}

std::vector<const Transaction*> index_by_id(const Block& block) {
    std::vector<const Transaction*> index(block.txs.size(), nullptr);
    for (const auto& tx : block.txs) index.at(tx.id) = &tx;
    return index;
}

}  // namespace detsched

#pragma once

// Core domain types: transactions, blocks, global state and per-transaction
// results. Everything here is a plain value type.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace detsched {

using TxId = std::uint32_t;
using ObjectKey = std::string;
using Value = std::int64_t;
using Length = std::uint64_t;

// Key -> value. Keys absent from the map read as 0.
using ValueMap = std::map<ObjectKey, Value>;

enum class ProgramKind { WriteConst, SumAndAdd, SleepOnly };

const char* to_string(ProgramKind kind);
// Throws ValidationError for an unknown name.
ProgramKind program_kind_from_string(const std::string& name);

struct TxProgram {
    ProgramKind kind = ProgramKind::SleepOnly;
    Value const_value = 0;

    bool operator==(const TxProgram&) const = default;
};

struct Transaction {
    TxId id = 0;
    std::vector<ObjectKey> read_set;   // sorted, unique
    std::vector<ObjectKey> write_set;  // sorted, unique
    Length length = 1;
    TxProgram program;

    bool operator==(const Transaction&) const = default;
};

// Builds a transaction with canonicalized (sorted, deduplicated) key sets.
Transaction make_transaction(TxId id, std::vector<ObjectKey> reads, std::vector<ObjectKey> writes,
                             Length length, TxProgram program);

struct Block {
    std::uint64_t seq = 0;
    std::string prev_hash;  // lowercase hex
    std::vector<Transaction> txs;

    bool operator==(const Block&) const = default;
};

struct GlobalState {
    ValueMap entries;

    Value get(const ObjectKey& key) const;
    void apply(const ValueMap& changes);

    bool operator==(const GlobalState&) const = default;
};

struct TxResult {
    TxId tx_id = 0;
    ValueMap read_values;
    ValueMap written_values;
    std::optional<std::uint64_t> finish_time;  // simulated executor only
    std::optional<std::string> error;          // set when the block was rejected

    bool operator==(const TxResult&) const = default;
};

// Runs a transaction's program on the values served for its read set.
// Pure: identical inputs give identical outputs. Arithmetic wraps modulo 2^64.
ValueMap run_program(const Transaction& tx, const ValueMap& reads);

// Returns a description of the first well-formedness problem, if any:
// ids must be exactly 0..n-1 (each once), lengths >= 1, keys non-empty.
std::optional<std::string> check_block(const Block& block);

// Throws ValidationError when check_block reports a problem.
void require_valid_block(const Block& block);

// lengths[id] for every transaction of a well-formed block.
std::vector<Length> lengths_of(const Block& block);

// Index of transactions by id, for blocks whose list order is not id order.
std::vector<const Transaction*> index_by_id(const Block& block);

}  // namespace detsched

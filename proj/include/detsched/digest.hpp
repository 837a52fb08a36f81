#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "detsched/model.hpp"

namespace detsched {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// Hash of the canonical block serialization; the next block's prev_hash.
std::string block_hash(const Block& block);
std::string state_digest(const GlobalState& state);
// Order-insensitive: results are canonicalized by tx id first.
std::string results_digest(const std::vector<TxResult>& results);

// prev_hash of the first block of a fresh stream.
std::string genesis_hash();

}  // namespace detsched

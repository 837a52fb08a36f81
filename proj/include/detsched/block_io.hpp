#pragma once

// Text formats for blocks, block streams, global state and results.
//
// A block is one JSON document:
//   {"prev_hash":"<hex>","seq":N,"txs":[{"id":0,"length":1,"program":{"const":0,"kind":"SLEEP_ONLY"},
//                                        "reads":["x"],"writes":["y"]}, ...]}
// Serialization is canonical (sorted object keys, sorted key sets, no
// whitespace), so parse -> serialize -> parse is the identity and
// serialize(parse(s)) == s for every canonical s.
//
// A block stream is JSON Lines: one canonical block document per line.

#include <iosfwd>
#include <string>
#include <vector>

#include "detsched/model.hpp"

namespace detsched {

std::string serialize_block(const Block& block);

// Throws ParseError (with a line number when one is known).
Block parse_block(const std::string& text);

std::string serialize_stream(const std::vector<Block>& blocks);
std::vector<Block> parse_stream(const std::string& text);

std::string serialize_state(const GlobalState& state);
GlobalState parse_state(const std::string& text);

// Results are emitted sorted by tx id.
std::string serialize_results(const std::vector<TxResult>& results);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Block read_block_file(const std::string& path);
std::vector<Block> read_stream_file(const std::string& path);

bool is_hex(const std::string& s);

}  // namespace detsched

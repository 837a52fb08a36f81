#include "detsched/block_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "detsched/errors.hpp"

namespace detsched {

using json = nlohmann::json;

namespace {

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

json parse_json(const std::string& text, std::size_t line_offset) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1) + line_offset;
        throw ParseError(e.what(), line);
    }
}

std::vector<ObjectKey> parse_keys(const json& j, const char* field) {
    if (!j.is_array()) throw ValidationError(std::string("'") + field + "' must be a list of keys");
    std::vector<ObjectKey> keys;
    for (const auto& k : j) {
        if (!k.is_string()) throw ValidationError(std::string("'") + field + "' entries must be strings");
        keys.push_back(k.get<std::string>());
    }
    return keys;
}

const json& field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ValidationError(std::string("missing field '") + name + "'");
    return *it;
}

json tx_to_json(const Transaction& tx) {
    return json{{"id", tx.id},
                {"reads", tx.read_set},
                {"writes", tx.write_set},
                {"length", tx.length},
                {"program", {{"kind", to_string(tx.program.kind)}, {"const", tx.program.const_value}}}};
}

Transaction tx_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("transaction must be an object");
    const auto& id = field(j, "id");
    const auto& length = field(j, "length");
    if (!id.is_number_unsigned() || id.get<std::uint64_t>() > 0xffffffffu) {
        throw ValidationError("'id' must be a non-negative integer");
    }
    if (!length.is_number_unsigned() || length.get<std::uint64_t>() < 1) {
        throw ValidationError("'length' must be a positive integer");
    }
    const auto& program = field(j, "program");
    TxProgram prog;
    prog.kind = program_kind_from_string(field(program, "kind").get<std::string>());
    if (auto it = program.find("const"); it != program.end()) {
        if (!it->is_number_integer()) throw ValidationError("'const' must be an integer");
        prog.const_value = it->get<Value>();
    }
    return make_transaction(id.get<TxId>(), parse_keys(field(j, "reads"), "reads"),
                            parse_keys(field(j, "writes"), "writes"), length.get<Length>(), prog);
}

json block_to_json(const Block& block) {
    json txs = json::array();
    for (const auto& tx : block.txs) txs.push_back(tx_to_json(tx));
    return json{{"seq", block.seq}, {"prev_hash", block.prev_hash}, {"txs", std::move(txs)}};
}

Block block_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("block must be an object");
    Block block;
    const auto& seq = field(j, "seq");
    if (!seq.is_number_unsigned()) {
        throw ValidationError("'seq' must be a non-negative integer");
    }
    block.seq = seq.get<std::uint64_t>();
    const auto& prev = field(j, "prev_hash");
    if (!prev.is_string() || !is_hex(prev.get<std::string>())) {
        throw ValidationError("'prev_hash' must be a lowercase hex string");
    }
    block.prev_hash = prev.get<std::string>();
    const auto& txs = field(j, "txs");
    if (!txs.is_array()) throw ValidationError("'txs' must be a list");
    std::size_t i = 0;
    for (const auto& tx : txs) {
        try {
            block.txs.push_back(tx_from_json(tx));
        } catch (const ValidationError& e) {
            throw ValidationError("txs[" + std::to_string(i) + "]: " + e.what());
        }
        ++i;
    }
    return block;
}

}  // namespace

bool is_hex(const std::string& s) {
    if (s.size() % 2 != 0) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

std::string serialize_block(const Block& block) { return block_to_json(block).dump(); }

Block parse_block(const std::string& text) {
    json j = parse_json(text, 0);
    try {
        return block_from_json(j);
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), 0);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0);
    }
}

std::string serialize_stream(const std::vector<Block>& blocks) {
    std::string out;
    for (const auto& b : blocks) {
        out += serialize_block(b);
        out += '\n';
    }
    return out;
}

std::vector<Block> parse_stream(const std::string& text) {
    std::vector<Block> blocks;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = parse_json(line, lineno - 1);
        try {
            blocks.push_back(block_from_json(j));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), lineno);
        } catch (const json::exception& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return blocks;
}

std::string serialize_state(const GlobalState& state) { return json(state.entries).dump(); }

GlobalState parse_state(const std::string& text) {
    json j = parse_json(text, 0);
    if (!j.is_object()) throw ParseError("state must be an object of key -> integer", 0);
    GlobalState state;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key().empty()) throw ParseError("state keys must be non-empty", 0);
        if (!it.value().is_number_integer()) {
            throw ParseError("state value for '" + it.key() + "' must be an integer", 0);
        }
        state.entries[it.key()] = it.value().get<Value>();
    }
    return state;
}

std::string serialize_results(const std::vector<TxResult>& results) {
    std::vector<const TxResult*> sorted;
    for (const auto& r : results) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const TxResult* a, const TxResult* b) { return a->tx_id < b->tx_id; });
    json arr = json::array();
    for (const auto* r : sorted) {
        json j{{"id", r->tx_id}, {"reads", r->read_values}, {"writes", r->written_values}};
        if (r->finish_time) j["finish"] = *r->finish_time;
        if (r->error) j["error"] = *r->error;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << contents;
}

Block read_block_file(const std::string& path) { return parse_block(read_file(path)); }

std::vector<Block> read_stream_file(const std::string& path) { return parse_stream(read_file(path)); }

}  // namespace detsched

#include <filesystem>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "detsched/asmr.hpp"
#include "detsched/digest.hpp"
#include "detsched/errors.hpp"

namespace detsched {

using json = nlohmann::json;

namespace {

std::string frame(const std::string& payload) {
    const auto n = static_cast<std::uint32_t>(payload.size());
    std::string out;
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
    return out + payload;
}

void append_record(const std::string& path, const std::string& payload, bool truncate) {
    std::ofstream out(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
    if (!out) throw ValidationError("cannot open ledger '" + path + "'");
    const std::string bytes = frame(payload);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw ValidationError("cannot write ledger '" + path + "'");
}

json genesis_payload(const std::string& initial_digest) {
    return json{{"type", "genesis"}, {"initial_state_digest", initial_digest}};
}

json block_payload(const LedgerRecord& r) {
    return json{{"type", "block"},
                {"seq", r.seq},
                {"block_hash", r.block_hash},
                {"results_digest", r.results_digest},
                {"state_digest", r.state_digest},
                {"changes", r.changes}};
}

}  // namespace

LedgerContents read_ledger(const std::string& path) {
    LedgerContents out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t off = 0;
    std::string chain;
    std::size_t index = 0;
    while (off < bytes.size()) {
        if (bytes.size() - off < 4) {
            out.torn_tail = true;
            break;
        }
        std::uint32_t len = 0;
        for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + i])) << (8 * i);
        if (bytes.size() - off - 4 < len) {
            out.torn_tail = true;
            break;
        }
        const bool last = off + 4 + len == bytes.size();
        json j;
        try {
            j = json::parse(bytes.substr(off + 4, len));
        } catch (const json::exception&) {
            if (last) {
                out.torn_tail = true;
                break;
            }
            throw ValidationError("ledger record " + std::to_string(index) + " is not readable");
        }
        try {
            const std::string stored = j.at("chain").get<std::string>();
            j.erase("chain");
            const std::string expect = sha256_hex(chain + j.dump());
            if (stored != expect) throw ValidationError("ledger digest chain broken at record " + std::to_string(index));
            chain = stored;
            if (index == 0) {
                if (j.at("type") != "genesis") throw ValidationError("ledger does not start with a genesis record");
                out.initial_state_digest = j.at("initial_state_digest").get<std::string>();
                out.genesis_chain = chain;
            } else {
                if (j.at("type") != "block") throw ValidationError("unexpected ledger record type");
                LedgerRecord r;
                r.seq = j.at("seq").get<std::uint64_t>();
                r.block_hash = j.at("block_hash").get<std::string>();
                r.results_digest = j.at("results_digest").get<std::string>();
                r.state_digest = j.at("state_digest").get<std::string>();
                r.changes = j.at("changes").get<ValueMap>();
                r.chain = chain;
                out.records.push_back(std::move(r));
            }
        } catch (const json::exception& e) {
            throw ValidationError("ledger record " + std::to_string(index) + ": " + e.what());
        }
        off += 4 + len;
        out.valid_bytes = off;
        ++index;
    }
    return out;
}

MainLoopResult run_main_loop(const BlockRunner& runner, const std::vector<Block>& stream,
                             const GlobalState& initial, const std::string& ledger_path, MainLoopOptions options) {
    MainLoopResult result;
    result.state = initial;
    std::string expected_prev = genesis_hash();
    std::string chain;
    std::size_t start = 0;
    const bool persist = !ledger_path.empty();

    auto write_genesis = [&] {
        json g = genesis_payload(state_digest(initial));
        chain = sha256_hex(g.dump());
        g["chain"] = chain;
        append_record(ledger_path, g.dump(), true);
    };

    if (persist && options.resume) {
        LedgerContents ledger = read_ledger(ledger_path);
        if (ledger.initial_state_digest.empty()) {
            write_genesis();
        } else {
            if (ledger.initial_state_digest != state_digest(initial)) {
                throw ValidationError("ledger was started from a different initial state");
            }
            if (ledger.torn_tail) std::filesystem::resize_file(ledger_path, ledger.valid_bytes);
            chain = ledger.genesis_chain;
            for (std::size_t i = 0; i < ledger.records.size(); ++i) {
                const LedgerRecord& r = ledger.records[i];
                if (r.seq != i) throw ValidationError("ledger seq gap at record " + std::to_string(i + 1));
                if (i >= stream.size()) throw ValidationError("ledger is ahead of the block stream");
                if (block_hash(stream[i]) != r.block_hash) {
                    throw ValidationError("ledger block " + std::to_string(i) + " does not match the stream");
                }
                result.state.apply(r.changes);
                if (state_digest(result.state) != r.state_digest) {
                    throw ValidationError("ledger state digest mismatch at block " + std::to_string(i));
                }
                expected_prev = r.block_hash;
                chain = r.chain;
            }
            start = ledger.records.size();
            result.resumed = start;
        }
    } else if (persist) {
        write_genesis();
    }

    for (std::size_t i = start; i < stream.size(); ++i) {
        if (options.max_blocks && result.processed >= *options.max_blocks) break;
        const Block& block = stream[i];
        if (block.seq != i) {
            throw ValidationError("block stream seq gap: expected " + std::to_string(i) + ", got " +
                                  std::to_string(block.seq));
        }
        if (block.prev_hash != expected_prev) {
            throw ValidationError("block " + std::to_string(i) + " prev_hash does not match the previous block");
        }
        BlockOutcome outcome = process_block(runner, block, result.state, options.exec);
        result.state.apply(outcome.state_changes);
        if (persist) {
            LedgerRecord r;
            r.seq = block.seq;
            r.block_hash = block_hash(block);
            r.results_digest = results_digest(outcome.results);
            r.state_digest = state_digest(result.state);
            r.changes = outcome.state_changes;
            json j = block_payload(r);
            chain = sha256_hex(chain + j.dump());
            j["chain"] = chain;
            append_record(ledger_path, j.dump(), false);
        }
        expected_prev = block_hash(block);
        result.results.push_back(std::move(outcome.results));
        ++result.processed;
    }
    return result;
}

}  // namespace detsched

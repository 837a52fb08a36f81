#include "detsched/digest.hpp"

#include <array>
#include <memory>

#include <openssl/evp.h>

#include "detsched/block_io.hpp"
#include "detsched/errors.hpp"

namespace detsched {

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw InvariantError("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xf]);
    }
    return out;
}

std::string block_hash(const Block& block) { return sha256_hex(serialize_block(block)); }

std::string state_digest(const GlobalState& state) { return sha256_hex(serialize_state(state)); }

std::string results_digest(const std::vector<TxResult>& results) {
    return sha256_hex(serialize_results(results));
}

std::string genesis_hash() { return std::string(64, '0'); }

}  // namespace detsched

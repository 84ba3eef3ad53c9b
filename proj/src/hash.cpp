#include "circmech/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace circmech {

namespace {

constexpr std::size_t kDigestLen = 32;

std::string to_hex(const unsigned char* digest, std::size_t len) {
    static const char* kHex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0f]);
    }
    return out;
}

struct CtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

CtxPtr new_sha256_ctx() {
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("failed to initialize sha256 context");
    }
    return ctx;
}

std::string finish_hex(EVP_MD_CTX* ctx) {
    unsigned char digest[kDigestLen];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &len) != 1 || len != kDigestLen) {
        throw std::runtime_error("failed to finalize sha256 digest");
    }
    return to_hex(digest, kDigestLen);
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    CtxPtr ctx = new_sha256_ctx();
    EVP_DigestUpdate(ctx.get(), data.data(), data.size());
    return finish_hex(ctx.get());
}

std::string sha256_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file for hashing: " + path);
    }
    CtxPtr ctx = new_sha256_ctx();
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = in.gcount();
        if (got > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
        }
    }
    return finish_hex(ctx.get());
}

std::uint64_t derive_substream(std::uint64_t root_seed, std::string_view label,
                               std::uint64_t index) {
    // Hash (seed || label || index) and take the leading 8 bytes. Integers are
    // serialized little-endian so the derivation is platform independent.
    std::array<unsigned char, 16> ints{};
    for (int i = 0; i < 8; ++i) {
        ints[static_cast<std::size_t>(i)] =
            static_cast<unsigned char>((root_seed >> (8 * i)) & 0xff);
        ints[static_cast<std::size_t>(8 + i)] =
            static_cast<unsigned char>((index >> (8 * i)) & 0xff);
    }
    CtxPtr ctx = new_sha256_ctx();
    EVP_DigestUpdate(ctx.get(), ints.data(), 8);
    EVP_DigestUpdate(ctx.get(), label.data(), label.size());
    EVP_DigestUpdate(ctx.get(), ints.data() + 8, 8);

    unsigned char digest[kDigestLen];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1 || len != kDigestLen) {
        throw std::runtime_error("failed to finalize sha256 digest");
    }
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) {
        out |= static_cast<std::uint64_t>(digest[i]) << (8 * i);
    }
    return out;
}

}  // namespace circmech

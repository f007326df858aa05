// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/hash.hpp>

#include <evsim/util/hex.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace evsim {

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

// One fetched algorithm per process and one context per thread; OpenSSL 3
// otherwise performs an implicit provider lookup on every digest.
const EVP_MD* Sha256Md()
{
    static const EVP_MD* md = [] {
        EVP_MD* fetched = EVP_MD_fetch(nullptr, "SHA256", nullptr);
        if (fetched == nullptr) throw std::runtime_error("OpenSSL: SHA256 unavailable");
        return fetched;
    }();
    return md;
}

EVP_MD_CTX* ThreadCtx()
{
    thread_local std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    return ctx.get();
}

void Digest(std::span<const uint8_t> data, uint8_t* out)
{
    EVP_MD_CTX* ctx = ThreadCtx();
    unsigned int len = 0;
    if (EVP_DigestInit_ex2(ctx, Sha256Md(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out, &len) != 1 || len != Hash256::kSize) {
        throw std::runtime_error("OpenSSL: SHA256 digest failed");
    }
}

} // namespace

Hash256::Hash256(std::span<const uint8_t, kSize> bytes)
{
    std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

Hash256 Hash256::FromHex(std::string_view hex)
{
    if (hex.size() != 2 * kSize) {
        throw std::invalid_argument("Hash256: expected 64 hex characters, got " + std::to_string(hex.size()));
    }
    std::vector<uint8_t> raw = ParseHex(hex);
    std::reverse(raw.begin(), raw.end());
    Hash256 out;
    std::copy(raw.begin(), raw.end(), out.bytes_.begin());
    return out;
}

std::string Hash256::ToHex() const
{
    std::array<uint8_t, kSize> rev;
    std::reverse_copy(bytes_.begin(), bytes_.end(), rev.begin());
    return evsim::ToHex(rev);
}

bool Hash256::IsNull() const
{
    return std::all_of(bytes_.begin(), bytes_.end(), [](uint8_t b) { return b == 0; });
}

Hash256 Sha256(std::span<const uint8_t> data)
{
    Hash256 out;
    Digest(data, out.data());
    return out;
}

Hash256 Sha256d(std::span<const uint8_t> data)
{
    Hash256 first = Sha256(data);
    Hash256 out;
    Digest(first.bytes(), out.data());
    return out;
}

Hash256 HashPair(const Hash256& left, const Hash256& right)
{
    std::array<uint8_t, 2 * Hash256::kSize> buf;
    std::copy(left.bytes().begin(), left.bytes().end(), buf.begin());
    std::copy(right.bytes().begin(), right.bytes().end(), buf.begin() + Hash256::kSize);
    return Sha256d(buf);
}

} // namespace evsim

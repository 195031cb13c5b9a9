/*
 * Copyright 2026 The VMGHE Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VMGHE_HASH_HPP
#define VMGHE_HASH_HPP

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <array>
#include <span>
#include <string_view>

#include "vmghe/serialize.hpp"

namespace vmghe {

using Digest = std::array<u8, 32>;

inline Digest sha256(std::span<const u8> data) {
    Digest out{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.data(), &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256: digest failure");
    }
    EVP_MD_CTX_free(ctx);
    return out;
}

inline Digest sha256(std::string_view s) {
    return sha256(std::span<const u8>(reinterpret_cast<const u8*>(s.data()), s.size()));
}

inline Digest hmac_sha256(std::span<const u8> key, std::span<const u8> msg) {
    Digest out{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(),
             out.data(), &len) == nullptr ||
        len != out.size()) {
        throw std::runtime_error("hmac_sha256: mac failure");
    }
    return out;
}

// Incremental hash for transcripts and state digests.
class DigestAccumulator {
public:
    DigestAccumulator() : ctx_(EVP_MD_CTX_new()) {
        if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("DigestAccumulator: init failure");
        }
    }
    ~DigestAccumulator() { EVP_MD_CTX_free(ctx_); }
    DigestAccumulator(const DigestAccumulator&) = delete;
    DigestAccumulator& operator=(const DigestAccumulator&) = delete;

    void update(std::span<const u8> data) {
        if (EVP_DigestUpdate(ctx_, data.data(), data.size()) != 1) {
            throw std::runtime_error("DigestAccumulator: update failure");
        }
    }
    void update(std::string_view s) {
        update(std::span<const u8>(reinterpret_cast<const u8*>(s.data()), s.size()));
    }

    Digest finish() {
        Digest out{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_, out.data(), &len) != 1) {
            throw std::runtime_error("DigestAccumulator: final failure");
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

// Stable 64-bit sub-seed derived from a master seed and a role string.
inline u64 derive_seed(u64 master, std::string_view role) {
    ByteWriter w;
    w.u64_(master);
    w.str(role);
    Digest d = sha256(w.data());
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(d[i]) << (8 * i);
    return v;
}

}  // namespace vmghe

#endif  // VMGHE_HASH_HPP

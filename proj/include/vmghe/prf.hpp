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

#ifndef VMGHE_PRF_HPP
#define VMGHE_PRF_HPP

#include <string_view>

#include "vmghe/hash.hpp"

namespace vmghe {

inline constexpr size_t kMaxLabelBytes = 256;

inline void check_label(std::string_view label) {
    if (label.empty() || label.size() > kMaxLabelBytes) {
        throw std::invalid_argument("label must be 1..256 bytes");
    }
}

// Keyed PRF (HMAC-SHA256) with two output shapes: 32-byte tags F(tau) and
// challenge values F(tau, j) in Z_p. Challenge values are produced by
// rejection sampling on 64-bit blocks, so the bias is below 2^-60 for any
// plaintext modulus we use.
class Prf {
public:
    explicit Prf(Bytes key) : key_(std::move(key)) {
        if (key_.empty()) throw std::invalid_argument("Prf: empty key");
    }

    static Prf from_seed(u64 seed, std::string_view role) {
        ByteWriter w;
        w.u64_(seed);
        w.str(role);
        Digest d = sha256(w.data());
        return Prf(Bytes(d.begin(), d.end()));
    }

    Digest tag(std::string_view label) const {
        check_label(label);
        ByteWriter w;
        w.u8_(0x01);
        w.str(label);
        return hmac_sha256(key_, w.data());
    }

    u64 challenge(std::string_view label, u32 slot, u64 modulus) const {
        check_label(label);
        if (modulus < 2) throw std::invalid_argument("Prf: modulus too small");
        u64 bound = (~u64(0) / modulus) * modulus;  // rejection threshold
        for (u32 counter = 0;; ++counter) {
            ByteWriter w;
            w.u8_(0x02);
            w.str(label);
            w.u32_(slot);
            w.u32_(counter);
            Digest d = hmac_sha256(key_, w.data());
            for (size_t off = 0; off + 8 <= d.size(); off += 8) {
                u64 v = 0;
                for (int i = 0; i < 8; ++i) v |= static_cast<u64>(d[off + i]) << (8 * i);
                if (v < bound) return v % modulus;
            }
        }
    }

private:
    Bytes key_;
};

// Collision-resistant hash with domain separation for the circuit hash tree.
namespace crhf {

inline Digest gate_add(const Digest& left, const Digest& right) {
    ByteWriter w;
    w.u8_(0x01);
    w.bytes(left);
    w.bytes(right);
    return sha256(w.data());
}

inline Digest gate_mul(const Digest& left, const Digest& right) {
    ByteWriter w;
    w.u8_(0x02);
    w.bytes(left);
    w.bytes(right);
    return sha256(w.data());
}

inline Digest constant(u64 value) {
    ByteWriter w;
    w.u8_(0x03);
    w.u64_(value);
    return sha256(w.data());
}

}  // namespace crhf

}  // namespace vmghe

#endif  // VMGHE_PRF_HPP

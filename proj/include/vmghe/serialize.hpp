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

#ifndef VMGHE_SERIALIZE_HPP
#define VMGHE_SERIALIZE_HPP

#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmghe/common.hpp"

namespace vmghe {

using Bytes = std::vector<u8>;

// All canonical binary formats are little-endian and carry a one-byte
// record tag plus a one-byte format version up front.
inline constexpr u8 kFormatVersion = 1;

enum class RecordTag : u8 {
    RingElement = 1,
    SecretKey = 2,
    PublicKeyShare = 3,
    JointKeys = 4,
    Ciphertext = 5,
    DecryptionShare = 6,
    Authenticator = 7,
    Circuit = 8,
    PublicParams = 9,
    SetGenShare = 10,
};

class ByteWriter {
public:
    void u8_(u8 v) { buf_.push_back(v); }
    void u16_(u16 v) {
        for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<u8>(v >> (8 * i)));
    }
    void u32_(u32 v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<u8>(v >> (8 * i)));
    }
    void u64_(u64 v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<u8>(v >> (8 * i)));
    }
    void bytes(std::span<const u8> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void sized_bytes(std::span<const u8> b) {
        u32_(static_cast<u32>(b.size()));
        bytes(b);
    }
    void str(std::string_view s) {
        u32_(static_cast<u32>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void header(RecordTag tag) {
        u8_(static_cast<u8>(tag));
        u8_(kFormatVersion);
    }

    Bytes take() { return std::move(buf_); }
    const Bytes& data() const { return buf_; }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const u8> data) : data_(data) {}

    u8 u8_() { return take(1)[0]; }
    u16 u16_() {
        auto b = take(2);
        return static_cast<u16>(b[0]) | static_cast<u16>(b[1]) << 8;
    }
    u32 u32_() {
        auto b = take(4);
        u32 v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<u32>(b[i]) << (8 * i);
        return v;
    }
    u64 u64_() {
        auto b = take(8);
        u64 v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
        return v;
    }
    Bytes sized_bytes() {
        u32 n = u32_();
        auto b = take(n);
        return Bytes(b.begin(), b.end());
    }
    std::string str() {
        u32 n = u32_();
        auto b = take(n);
        return std::string(b.begin(), b.end());
    }
    void expect_header(RecordTag tag) {
        u8 t = u8_();
        u8 v = u8_();
        if (t != static_cast<u8>(tag)) throw std::runtime_error("serialized record has wrong tag");
        if (v != kFormatVersion) throw std::runtime_error("serialized record has unsupported version");
    }
    bool at_end() const { return pos_ == data_.size(); }
    size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const u8> take(size_t n) {
        if (pos_ + n > data_.size()) throw std::runtime_error("serialized record truncated");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const u8> data_;
    size_t pos_ = 0;
};

inline std::string to_hex(std::span<const u8> data) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(2 * data.size());
    for (u8 b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

inline Bytes from_hex(std::string_view s) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: invalid character");
    };
    if (s.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<u8>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
    }
    return out;
}

}  // namespace vmghe

#endif  // VMGHE_SERIALIZE_HPP

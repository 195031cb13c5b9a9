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

#ifndef VMGHE_COMMON_HPP
#define VMGHE_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vmghe {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr bool is_power_of_two(u64 n) { return n != 0 && (n & (n - 1)) == 0; }

inline constexpr int log2_exact(u64 n) {
    int b = 0;
    while ((u64(1) << b) < n) ++b;
    return b;
}

inline constexpr u32 reverse_bits(u32 v, int bit_count) {
    u32 r = 0;
    for (int i = 0; i < bit_count; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return s >= m ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Modular inverse for prime modulus.
inline u64 inv_mod_prime(u64 a, u64 p) {
    if (a % p == 0) throw std::invalid_argument("inv_mod_prime: zero has no inverse");
    return pow_mod(a % p, p - 2, p);
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace vmghe

#endif  // VMGHE_COMMON_HPP

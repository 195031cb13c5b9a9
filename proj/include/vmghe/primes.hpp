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

#ifndef VMGHE_PRIMES_HPP
#define VMGHE_PRIMES_HPP

#include <vector>

#include "vmghe/common.hpp"

namespace vmghe {

// Deterministic Miller-Rabin, exact for all 64-bit inputs with this base set.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Largest `count` primes p < 2^bits with p = 1 (mod 2N), skipping any in `exclude`.
// The search is deterministic, so every run of a preset sees the same moduli.
inline std::vector<u64> find_ntt_primes(int bits, u64 two_n, int count,
                                        const std::vector<u64>& exclude = {}) {
    if (bits < 2 || bits > 62) throw std::invalid_argument("find_ntt_primes: bits out of range");
    std::vector<u64> out;
    u64 upper = u64(1) << bits;
    u64 cand = ((upper - 2) / two_n) * two_n + 1;
    u64 lower = bits > 2 ? (u64(1) << (bits - 1)) : 2;
    while (out.size() < static_cast<size_t>(count) && cand > lower) {
        if (is_prime_u64(cand)) {
            bool skip = false;
            for (u64 e : exclude) {
                if (e == cand) skip = true;
            }
            for (u64 got : out) {
                if (got == cand) skip = true;
            }
            if (!skip) out.push_back(cand);
        }
        if (cand < two_n) break;
        cand -= two_n;
    }
    if (out.size() < static_cast<size_t>(count)) {
        throw std::runtime_error("find_ntt_primes: not enough primes in range");
    }
    return out;
}

}  // namespace vmghe

#endif  // VMGHE_PRIMES_HPP

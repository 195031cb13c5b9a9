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

#ifndef VMGHE_BIGINT_HPP
#define VMGHE_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "vmghe/common.hpp"

namespace vmghe {

using BigInt = boost::multiprecision::cpp_int;

// Canonical residue in [0, m).
inline BigInt mod_canonical(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

// Centered representative in (-m/2, m/2].
inline BigInt mod_centered(const BigInt& x, const BigInt& m) {
    BigInt r = mod_canonical(x, m);
    if (2 * r > m) r -= m;
    return r;
}

// round(x / d) with ties away from zero; d > 0.
inline BigInt round_div(const BigInt& x, const BigInt& d) {
    if (d <= 0) throw std::invalid_argument("round_div: denominator must be positive");
    BigInt ax = x < 0 ? BigInt(-x) : x;
    BigInt q = (2 * ax + d) / (2 * d);
    return x < 0 ? BigInt(-q) : q;
}

inline u64 bigint_to_u64_mod(const BigInt& x, u64 m) {
    return static_cast<u64>(mod_canonical(x, BigInt(m)));
}

}  // namespace vmghe

#endif  // VMGHE_BIGINT_HPP

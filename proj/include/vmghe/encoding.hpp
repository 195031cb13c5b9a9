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

#ifndef VMGHE_ENCODING_HPP
#define VMGHE_ENCODING_HPP

#include <vector>

#include "vmghe/ntt.hpp"

namespace vmghe {

// CRT slot view of the plaintext ring R_p, for p = 1 (mod 2N): x^N + 1
// splits into linear factors, so a polynomial is equivalent to its vector
// of evaluations (slots), and ring add/mul act slot-wise. The slot order is
// the transform's natural order; it only has to be consistent.
class SlotEncoder {
public:
    SlotEncoder(u64 plaintext_modulus, u64 degree) : p_(plaintext_modulus), n_(degree), ntt_(plaintext_modulus, degree) {}

    u64 modulus() const { return p_; }
    u64 slot_count() const { return n_; }

    // Polynomial coefficients (length N, canonical mod p) from slot values.
    std::vector<u64> encode(std::vector<u64> slots) const {
        if (slots.size() > n_) throw std::invalid_argument("SlotEncoder: too many slots");
        slots.resize(n_, 0);
        for (auto& v : slots) v %= p_;
        ntt_.inverse(slots);
        return slots;
    }

    std::vector<u64> decode(std::vector<u64> coeffs) const {
        if (coeffs.size() != n_) throw std::invalid_argument("SlotEncoder: wrong coefficient count");
        for (auto& v : coeffs) v %= p_;
        ntt_.forward(coeffs);
        return coeffs;
    }

    // Constant polynomial: the same value in every slot.
    std::vector<u64> encode_constant(u64 value) const {
        std::vector<u64> coeffs(n_, 0);
        coeffs[0] = value % p_;
        return coeffs;
    }

private:
    u64 p_;
    u64 n_;
    NttTables ntt_;
};

}  // namespace vmghe

#endif  // VMGHE_ENCODING_HPP

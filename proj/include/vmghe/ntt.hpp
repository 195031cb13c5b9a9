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

#ifndef VMGHE_NTT_HPP
#define VMGHE_NTT_HPP

#include <span>
#include <vector>

#include "vmghe/common.hpp"
#include "vmghe/primes.hpp"

namespace vmghe {

// Negacyclic number-theoretic transform modulo a prime q = 1 (mod 2N).
// Forward/inverse use the merged-psi formulation: the transform of a is the
// evaluation of a(x) at the odd powers of a primitive 2N-th root of unity,
// so pointwise products correspond to products in Z_q[x]/(x^N + 1).
class NttTables {
public:
    NttTables(u64 prime, u64 degree) : q_(prime), n_(degree) {
        if (!is_power_of_two(degree)) throw std::invalid_argument("NttTables: degree not a power of two");
        if ((prime - 1) % (2 * degree) != 0) throw std::invalid_argument("NttTables: prime not 1 mod 2N");
        log_n_ = log2_exact(degree);
        u64 psi = find_primitive_2n_root(prime, degree);
        u64 inv_psi = inv_mod_prime(psi, prime);
        psi_brv_.resize(degree);
        inv_psi_brv_.resize(degree);
        u64 pw = 1, ipw = 1;
        for (u64 i = 0; i < degree; ++i) {
            psi_brv_[reverse_bits(static_cast<u32>(i), log_n_)] = pw;
            inv_psi_brv_[reverse_bits(static_cast<u32>(i), log_n_)] = ipw;
            pw = mul_mod(pw, psi, prime);
            ipw = mul_mod(ipw, inv_psi, prime);
        }
        n_inv_ = inv_mod_prime(degree % prime, prime);
    }

    u64 prime() const { return q_; }
    u64 degree() const { return n_; }

    void forward(std::span<u64> a) const {
        u64 t = n_;
        for (u64 m = 1; m < n_; m <<= 1) {
            t >>= 1;
            for (u64 i = 0; i < m; ++i) {
                u64 w = psi_brv_[m + i];
                u64 j1 = 2 * i * t;
                for (u64 j = j1; j < j1 + t; ++j) {
                    u64 u = a[j];
                    u64 v = mul_mod(a[j + t], w, q_);
                    a[j] = add_mod(u, v, q_);
                    a[j + t] = sub_mod(u, v, q_);
                }
            }
        }
    }

    void inverse(std::span<u64> a) const {
        u64 t = 1;
        for (u64 m = n_; m > 1; m >>= 1) {
            u64 j1 = 0;
            u64 h = m >> 1;
            for (u64 i = 0; i < h; ++i) {
                u64 w = inv_psi_brv_[h + i];
                for (u64 j = j1; j < j1 + t; ++j) {
                    u64 u = a[j];
                    u64 v = a[j + t];
                    a[j] = add_mod(u, v, q_);
                    a[j + t] = mul_mod(sub_mod(u, v, q_), w, q_);
                }
                j1 += 2 * t;
            }
            t <<= 1;
        }
        for (u64 j = 0; j < n_; ++j) a[j] = mul_mod(a[j], n_inv_, q_);
    }

private:
    static u64 find_primitive_2n_root(u64 q, u64 n) {
        u64 order = 2 * n;
        u64 cofactor = (q - 1) / order;
        for (u64 x = 2; x < q; ++x) {
            u64 psi = pow_mod(x, cofactor, q);
            // psi^N = -1 forces the order to be exactly 2N.
            if (pow_mod(psi, n, q) == q - 1) return psi;
        }
        throw std::runtime_error("NttTables: no primitive 2N-th root found");
    }

    u64 q_;
    u64 n_;
    int log_n_ = 0;
    u64 n_inv_ = 0;
    std::vector<u64> psi_brv_;
    std::vector<u64> inv_psi_brv_;
};

}  // namespace vmghe

#endif  // VMGHE_NTT_HPP

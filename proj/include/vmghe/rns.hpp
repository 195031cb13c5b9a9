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

#ifndef VMGHE_RNS_HPP
#define VMGHE_RNS_HPP

#include <memory>
#include <optional>
#include <vector>

#include "vmghe/bigint.hpp"
#include "vmghe/common.hpp"
#include "vmghe/ntt.hpp"
#include "vmghe/primes.hpp"

namespace vmghe {

// Residue system for R_q = Z_q[x]/(x^N + 1) with q = q_0 * ... * q_{l-1}.
// The primes are grouped into digits by a partition 0 = j_0 < ... < j_k = l;
// digit i covers primes [j_i, j_{i+1}) and has modulus Q_i, the product of
// its primes. Contexts are immutable and shared read-only.
//
// Primes that are 1 mod 2N get NTT tables and the fast multiplication path;
// other primes are legal (the small hand-checkable moduli in the test suite
// use them) and multiply through an exact schoolbook path instead. Scheme
// parameters always use NTT-friendly primes; setup enforces that.
class RnsContext {
public:
    RnsContext(u64 degree, std::vector<u64> primes, std::vector<size_t> partition)
        : n_(degree), primes_(std::move(primes)), partition_(std::move(partition)) {
        if (!is_power_of_two(n_)) throw std::invalid_argument("RnsContext: N must be a power of two");
        if (primes_.empty()) throw std::invalid_argument("RnsContext: prime list empty");
        for (u64 p : primes_) {
            if (!is_prime_u64(p)) throw std::invalid_argument("RnsContext: modulus is not prime");
        }
        for (size_t i = 0; i < primes_.size(); ++i) {
            for (size_t j = i + 1; j < primes_.size(); ++j) {
                if (gcd_u64(primes_[i], primes_[j]) != 1) {
                    throw std::invalid_argument("RnsContext: moduli are not pairwise coprime");
                }
            }
        }
        if (partition_.size() < 2 || partition_.front() != 0 || partition_.back() != primes_.size()) {
            throw std::invalid_argument("RnsContext: malformed digit partition");
        }
        for (size_t i = 0; i + 1 < partition_.size(); ++i) {
            if (partition_[i] >= partition_[i + 1]) {
                throw std::invalid_argument("RnsContext: partition must be strictly increasing");
            }
        }

        modulus_ = 1;
        for (u64 p : primes_) modulus_ *= p;

        size_t k = partition_.size() - 1;
        digit_moduli_.resize(k);
        for (size_t i = 0; i < k; ++i) {
            BigInt qi = 1;
            for (size_t j = partition_[i]; j < partition_[i + 1]; ++j) qi *= primes_[j];
            digit_moduli_[i] = qi;
        }

        ntt_.reserve(primes_.size());
        ntt_ready_ = true;
        for (u64 p : primes_) {
            if ((p - 1) % (2 * n_) == 0) {
                ntt_.emplace_back(std::in_place, p, n_);
            } else {
                ntt_.emplace_back(std::nullopt);
                ntt_ready_ = false;
            }
        }

        // CRT data: M_j = q / q_j and y_j = M_j^{-1} mod q_j.
        crt_cofactor_.resize(primes_.size());
        crt_cofactor_inv_.resize(primes_.size());
        for (size_t j = 0; j < primes_.size(); ++j) {
            crt_cofactor_[j] = modulus_ / primes_[j];
            crt_cofactor_inv_[j] =
                inv_mod_prime(bigint_to_u64_mod(crt_cofactor_[j], primes_[j]), primes_[j]);
        }

        // Per-digit fast-base data: for prime j in digit i, the inverse of
        // Q_i / q_j modulo q_j, and Q_i / q_j itself.
        digit_cofactor_inv_.resize(primes_.size());
        digit_cofactor_.resize(primes_.size());
        for (size_t i = 0; i < k; ++i) {
            for (size_t j = partition_[i]; j < partition_[i + 1]; ++j) {
                BigInt cof = digit_moduli_[i] / primes_[j];
                digit_cofactor_[j] = cof;
                digit_cofactor_inv_[j] = inv_mod_prime(bigint_to_u64_mod(cof, primes_[j]), primes_[j]);
            }
        }
    }

    u64 degree() const { return n_; }
    size_t prime_count() const { return primes_.size(); }
    size_t digit_count() const { return partition_.size() - 1; }
    const std::vector<u64>& primes() const { return primes_; }
    u64 prime(size_t j) const { return primes_[j]; }
    const std::vector<size_t>& partition() const { return partition_; }
    size_t digit_begin(size_t i) const { return partition_[i]; }
    size_t digit_end(size_t i) const { return partition_[i + 1]; }
    const BigInt& modulus() const { return modulus_; }
    const BigInt& digit_modulus(size_t i) const { return digit_moduli_[i]; }
    bool ntt_ready() const { return ntt_ready_; }
    const NttTables& ntt(size_t j) const {
        if (!ntt_[j]) throw std::logic_error("RnsContext: prime has no NTT tables");
        return *ntt_[j];
    }
    const BigInt& crt_cofactor(size_t j) const { return crt_cofactor_[j]; }
    u64 crt_cofactor_inv(size_t j) const { return crt_cofactor_inv_[j]; }
    const BigInt& digit_cofactor(size_t j) const { return digit_cofactor_[j]; }
    u64 digit_cofactor_inv(size_t j) const { return digit_cofactor_inv_[j]; }

    // Digit index owning prime position j.
    size_t digit_of(size_t j) const {
        for (size_t i = 0; i + 1 < partition_.size(); ++i) {
            if (j >= partition_[i] && j < partition_[i + 1]) return i;
        }
        throw std::out_of_range("RnsContext: prime index out of range");
    }

    // Short fingerprint used to tag serialized elements.
    u64 fingerprint() const {
        u64 h = 1469598103934665603ull;
        auto mix = [&h](u64 v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(n_);
        for (u64 p : primes_) mix(p);
        for (size_t b : partition_) mix(static_cast<u64>(b));
        return h;
    }

private:
    u64 n_;
    std::vector<u64> primes_;
    std::vector<size_t> partition_;
    BigInt modulus_;
    std::vector<BigInt> digit_moduli_;
    std::vector<std::optional<NttTables>> ntt_;
    bool ntt_ready_ = false;
    std::vector<BigInt> crt_cofactor_;
    std::vector<u64> crt_cofactor_inv_;
    std::vector<BigInt> digit_cofactor_;
    std::vector<u64> digit_cofactor_inv_;
};

using ContextPtr = std::shared_ptr<const RnsContext>;

inline ContextPtr make_context(u64 degree, std::vector<u64> primes, std::vector<size_t> partition) {
    return std::make_shared<const RnsContext>(degree, std::move(primes), std::move(partition));
}

// Per-prime partition: every digit is a single prime.
inline ContextPtr make_context(u64 degree, std::vector<u64> primes) {
    std::vector<size_t> partition(primes.size() + 1);
    for (size_t i = 0; i < partition.size(); ++i) partition[i] = i;
    return make_context(degree, std::move(primes), std::move(partition));
}

}  // namespace vmghe

#endif  // VMGHE_RNS_HPP

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

#ifndef VMGHE_GADGET_HPP
#define VMGHE_GADGET_HPP

#include <cmath>
#include <vector>

#include "vmghe/ring.hpp"

namespace vmghe {

enum class GadgetFlavor : u8 { Digit, Prime, Binary };

// Gadget vector g over R_q together with the digit decomposition h, so that
// <g, h(a)> = a (mod q). For the digit and prime flavors g_i is the CRT
// idempotent of digit i: g_i = 1 mod q_j inside the digit and 0 outside,
// which is what makes the decomposition homomorphic (sums and entry-wise
// products of decompositions remain valid decompositions).
class GadgetVector {
public:
    static GadgetVector digit(const ContextPtr& ctx) { return GadgetVector(ctx, GadgetFlavor::Digit); }

    // Prime flavor: digit decomposition on the per-prime partition. Valid
    // only when the context partition is already one prime per digit.
    static GadgetVector prime(const ContextPtr& ctx) {
        if (ctx->digit_count() != ctx->prime_count()) {
            throw std::invalid_argument("prime gadget requires a per-prime digit partition");
        }
        return GadgetVector(ctx, GadgetFlavor::Prime);
    }

    // Binary flavor over a power-of-two chain 1, 2, ..., 2^{chain_len-1}.
    static GadgetVector binary(const ContextPtr& ctx, size_t chain_len) {
        if (chain_len == 0) throw std::invalid_argument("binary gadget needs a nonempty chain");
        GadgetVector g;
        g.ctx_ = ctx;
        g.flavor_ = GadgetFlavor::Binary;
        g.values_.resize(chain_len);
        BigInt pw = 1;
        for (size_t i = 0; i < chain_len; ++i) {
            g.values_[i] = pw;
            pw <<= 1;
        }
        g.make_elements();
        return g;
    }

    const ContextPtr& context() const { return ctx_; }
    GadgetFlavor flavor() const { return flavor_; }
    size_t size() const { return values_.size(); }
    const BigInt& value(size_t i) const { return values_[i]; }
    const RingElement& element(size_t i) const { return elements_[i]; }

private:
    GadgetVector() = default;

    GadgetVector(const ContextPtr& ctx, GadgetFlavor flavor) : ctx_(ctx), flavor_(flavor) {
        size_t k = ctx->digit_count();
        values_.resize(k);
        const BigInt& q = ctx->modulus();
        for (size_t i = 0; i < k; ++i) {
            const BigInt& qi = ctx->digit_modulus(i);
            BigInt cof = q / qi;  // product of the other digits, coprime to Q_i
            BigInt inv = mod_inverse(cof % qi, qi);
            values_[i] = mod_canonical(inv * cof, q);
            // residue pattern: 1 inside the digit, 0 outside
            for (size_t j = 0; j < ctx->prime_count(); ++j) {
                u64 expect = (j >= ctx->digit_begin(i) && j < ctx->digit_end(i)) ? 1 : 0;
                if (bigint_to_u64_mod(values_[i], ctx->prime(j)) != expect) {
                    throw std::logic_error("gadget component violates its residue pattern");
                }
            }
        }
        make_elements();
    }

    static BigInt mod_inverse(const BigInt& a, const BigInt& m) {
        // extended Euclid; the cofactor is coprime to Q_i by construction
        BigInt old_r = mod_canonical(a, m), r = m;
        BigInt old_s = 1, s = 0;
        while (r != 0) {
            BigInt quot = old_r / r;
            BigInt tmp = old_r - quot * r;
            old_r = r;
            r = tmp;
            tmp = old_s - quot * s;
            old_s = s;
            s = tmp;
        }
        if (old_r != 1) throw std::logic_error("gadget cofactor not invertible");
        return mod_canonical(old_s, m);
    }

    void make_elements() {
        elements_.clear();
        elements_.reserve(values_.size());
        for (const auto& v : values_) elements_.push_back(from_constant(v, ctx_));
    }

    ContextPtr ctx_;
    GadgetFlavor flavor_ = GadgetFlavor::Digit;
    std::vector<BigInt> values_;
    std::vector<RingElement> elements_;
};

// Decomposition of a ring element: one small-norm component per gadget
// entry, stored in the residue system of `target`.
struct DecomposedElement {
    std::vector<RingElement> components;
    GadgetFlavor flavor = GadgetFlavor::Digit;
};

namespace detail {

// Rounded correction sum(v_j / q_j) from the fast-base-conversion identity.
// Computed in doubles, with an exact fallback when the fractional part is
// too close to a rounding boundary for double precision.
inline BigInt rounded_correction(std::span<const u64> residues, std::span<const u64> primes,
                                 std::span<const BigInt> cofactors, const BigInt& digit_modulus) {
    double acc = 0;
    for (size_t t = 0; t < residues.size(); ++t) {
        acc += static_cast<double>(residues[t]) / static_cast<double>(primes[t]);
    }
    double nearest = std::nearbyint(acc);
    // safe iff the value sits clear of the half-integer rounding boundary
    if (0.5 - std::abs(acc - nearest) > 1e-6 && std::abs(acc) < 0x1.0p52) {
        return BigInt(static_cast<long long>(nearest));
    }
    // exact route: sum(v_j * Q_i/q_j) / Q_i as one rational rounding
    BigInt numer = 0;
    for (size_t t = 0; t < residues.size(); ++t) numer += cofactors[t] * residues[t];
    return round_div(numer, digit_modulus);
}

}  // namespace detail

// Digit decomposition h(a) = ([a]_{Q_0}, ..., [a]_{Q_{k-1}}) with centered
// representatives, evaluated through the per-digit base-conversion identity:
//   [a]_{Q_i} = sum_j [ (Q_i/q_j)^{-1} a_j ]_{q_j} * (Q_i/q_j) - Q_i * round(sum_j [...]_{q_j} / q_j).
// Components land in the residue system of `target` (defaults to the
// gadget's own context).
inline DecomposedElement decompose(const RingElement& a, const GadgetVector& g,
                                   const ContextPtr& target) {
    const auto& ctx = *g.context();
    if (a.context().get() != g.context().get()) {
        throw std::invalid_argument("decompose: element and gadget contexts differ");
    }
    RingElement ac = a;
    ac.to_coeff();
    DecomposedElement out;
    out.flavor = g.flavor();

    if (g.flavor() == GadgetFlavor::Binary) {
        auto coeffs = to_bigint(ac);
        // binary expansion of the canonical representative
        std::vector<std::vector<BigInt>> comps(g.size(), std::vector<BigInt>(ctx.degree(), 0));
        for (size_t c = 0; c < ctx.degree(); ++c) {
            BigInt v = mod_canonical(coeffs[c], ctx.modulus());
            for (size_t i = 0; i < g.size() && v != 0; ++i) {
                comps[i][c] = v & 1;
                v >>= 1;
            }
            if (BigInt check = mod_canonical(coeffs[c], ctx.modulus()); (check >> g.size()) != 0) {
                throw std::invalid_argument("binary gadget chain too short for this modulus");
            }
        }
        for (size_t i = 0; i < g.size(); ++i) out.components.push_back(from_bigint(comps[i], target));
        return out;
    }

    size_t n = ctx.degree();
    std::vector<BigInt> comp(n);
    std::vector<u64> residues, primes;
    std::vector<BigInt> cofactors;
    for (size_t i = 0; i < ctx.digit_count(); ++i) {
        size_t lo = ctx.digit_begin(i), hi = ctx.digit_end(i);
        residues.resize(hi - lo);
        primes.resize(hi - lo);
        cofactors.resize(hi - lo);
        for (size_t j = lo; j < hi; ++j) {
            primes[j - lo] = ctx.prime(j);
            cofactors[j - lo] = ctx.digit_cofactor(j);
        }
        const BigInt& qi = ctx.digit_modulus(i);
        for (size_t c = 0; c < n; ++c) {
            BigInt acc = 0;
            for (size_t j = lo; j < hi; ++j) {
                u64 v = mul_mod(ac.get(j, c), ctx.digit_cofactor_inv(j), ctx.prime(j));
                residues[j - lo] = v;
                acc += cofactors[j - lo] * v;
            }
            BigInt corr = detail::rounded_correction(residues, primes, cofactors, qi);
            comp[c] = acc - qi * corr;
        }
        out.components.push_back(from_bigint(comp, target));
    }
    return out;
}

inline DecomposedElement decompose(const RingElement& a, const GadgetVector& g) {
    return decompose(a, g, g.context());
}

// Exact inner product <g, u> mod q.
inline RingElement reconstruct(const DecomposedElement& u, const GadgetVector& g) {
    if (u.components.size() != g.size()) throw std::invalid_argument("reconstruct: length mismatch");
    RingElement acc(g.context(), Domain::Coeff);
    for (size_t i = 0; i < g.size(); ++i) {
        if (u.components[i].context().get() != g.context().get()) {
            throw std::invalid_argument("reconstruct: component context mismatch");
        }
        acc = ring_add(acc, ring_mul(u.components[i], g.element(i)));
    }
    return acc;
}

// RNS form of the digit components over a foreign modulus p:
//   [[a]_{Q_i}]_p = sum_j [ (Q_i/q_j)^{-1} a_j ]_{q_j} * [Q_i/q_j]_p
//                   - [Q_i]_p * round(sum_j [...]_{q_j} / q_j)   (mod p).
// Returns one residue row (length N) per digit.
inline std::vector<std::vector<u64>> decompose_foreign(const RingElement& a, const GadgetVector& g,
                                                       u64 p) {
    if (p < 2) throw std::invalid_argument("decompose_foreign: modulus must be at least 2");
    if (g.flavor() == GadgetFlavor::Binary) {
        throw std::invalid_argument("decompose_foreign: defined for digit/prime flavors");
    }
    if (a.context().get() != g.context().get()) {
        throw std::invalid_argument("decompose_foreign: element and gadget contexts differ");
    }
    const auto& ctx = *g.context();
    RingElement ac = a;
    ac.to_coeff();

    size_t n = ctx.degree();
    std::vector<std::vector<u64>> out(ctx.digit_count(), std::vector<u64>(n, 0));
    std::vector<u64> residues, primes;
    std::vector<BigInt> cofactors;
    std::vector<u64> cof_mod_p;
    for (size_t i = 0; i < ctx.digit_count(); ++i) {
        size_t lo = ctx.digit_begin(i), hi = ctx.digit_end(i);
        residues.resize(hi - lo);
        primes.resize(hi - lo);
        cofactors.resize(hi - lo);
        cof_mod_p.resize(hi - lo);
        for (size_t j = lo; j < hi; ++j) {
            primes[j - lo] = ctx.prime(j);
            cofactors[j - lo] = ctx.digit_cofactor(j);
            cof_mod_p[j - lo] = bigint_to_u64_mod(ctx.digit_cofactor(j), p);
        }
        const BigInt& qi = ctx.digit_modulus(i);
        u64 qi_mod_p = bigint_to_u64_mod(qi, p);
        for (size_t c = 0; c < n; ++c) {
            u64 acc = 0;
            for (size_t j = lo; j < hi; ++j) {
                u64 v = mul_mod(ac.get(j, c), ctx.digit_cofactor_inv(j), ctx.prime(j));
                residues[j - lo] = v;
                acc = add_mod(acc, mul_mod(v % p, cof_mod_p[j - lo], p), p);
            }
            BigInt corr = detail::rounded_correction(residues, primes, cofactors, qi);
            u64 corr_mod_p = bigint_to_u64_mod(corr, p);
            out[i][c] = sub_mod(acc, mul_mod(qi_mod_p, corr_mod_p, p), p);
        }
    }
    return out;
}

}  // namespace vmghe

#endif  // VMGHE_GADGET_HPP

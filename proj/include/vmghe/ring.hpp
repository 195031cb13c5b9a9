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

#ifndef VMGHE_RING_HPP
#define VMGHE_RING_HPP

#include <algorithm>
#include <span>
#include <vector>

#include "vmghe/rns.hpp"
#include "vmghe/serialize.hpp"

namespace vmghe {

enum class Domain : u8 { Coeff = 0, Ntt = 1 };

// Element of R_q in residue form: one length-N residue row per prime,
// stored limb-major. Residues are always canonical in [0, q_j).
class RingElement {
public:
    RingElement() = default;

    explicit RingElement(ContextPtr ctx, Domain domain = Domain::Coeff)
        : ctx_(std::move(ctx)), domain_(domain), limbs_(ctx_->prime_count() * ctx_->degree(), 0) {}

    const ContextPtr& context() const { return ctx_; }
    Domain domain() const { return domain_; }
    bool is_zero() const {
        return std::all_of(limbs_.begin(), limbs_.end(), [](u64 v) { return v == 0; });
    }

    u64 get(size_t limb, size_t coeff) const { return limbs_[limb * ctx_->degree() + coeff]; }
    void set(size_t limb, size_t coeff, u64 v) { limbs_[limb * ctx_->degree() + coeff] = v; }

    std::span<u64> limb(size_t j) { return {limbs_.data() + j * ctx_->degree(), ctx_->degree()}; }
    std::span<const u64> limb(size_t j) const {
        return {limbs_.data() + j * ctx_->degree(), ctx_->degree()};
    }

    void to_ntt() {
        if (domain_ == Domain::Ntt) return;
        if (!ctx_->ntt_ready()) throw std::logic_error("RingElement: context lacks NTT support");
        for (size_t j = 0; j < ctx_->prime_count(); ++j) ctx_->ntt(j).forward(limb(j));
        domain_ = Domain::Ntt;
    }

    void to_coeff() {
        if (domain_ == Domain::Coeff) return;
        for (size_t j = 0; j < ctx_->prime_count(); ++j) ctx_->ntt(j).inverse(limb(j));
        domain_ = Domain::Coeff;
    }

    friend bool operator==(const RingElement& a, const RingElement& b) {
        if (a.ctx_.get() != b.ctx_.get()) return false;
        if (a.domain_ == b.domain_) return a.limbs_ == b.limbs_;
        RingElement ac = a, bc = b;
        ac.to_coeff();
        bc.to_coeff();
        return ac.limbs_ == bc.limbs_;
    }

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::RingElement);
        w.u64_(ctx_->fingerprint());
        w.u8_(static_cast<u8>(domain_));
        w.u32_(static_cast<u32>(ctx_->prime_count()));
        w.u32_(static_cast<u32>(ctx_->degree()));
        for (u64 v : limbs_) w.u64_(v);
        return w.take();
    }

    static RingElement deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::RingElement);
        if (r.u64_() != ctx->fingerprint()) throw std::runtime_error("RingElement: context mismatch");
        Domain d = static_cast<Domain>(r.u8_());
        u32 l = r.u32_();
        u32 n = r.u32_();
        if (l != ctx->prime_count() || n != ctx->degree()) {
            throw std::runtime_error("RingElement: shape mismatch");
        }
        RingElement e(ctx, d);
        for (auto& v : e.limbs_) v = r.u64_();
        return e;
    }

private:
    ContextPtr ctx_;
    Domain domain_ = Domain::Coeff;
    std::vector<u64> limbs_;
};

namespace detail {
inline void require_same_context(const RingElement& a, const RingElement& b) {
    if (a.context().get() != b.context().get()) {
        throw std::invalid_argument("ring op: elements belong to different contexts");
    }
}
}  // namespace detail

inline RingElement ring_add(const RingElement& a, const RingElement& b) {
    detail::require_same_context(a, b);
    RingElement ac = a, bc = b;
    if (ac.domain() != bc.domain()) {
        ac.to_coeff();
        bc.to_coeff();
    }
    const auto& ctx = *a.context();
    RingElement out(a.context(), ac.domain());
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        for (size_t c = 0; c < ctx.degree(); ++c) out.set(j, c, add_mod(ac.get(j, c), bc.get(j, c), q));
    }
    return out;
}

inline RingElement ring_sub(const RingElement& a, const RingElement& b) {
    detail::require_same_context(a, b);
    RingElement ac = a, bc = b;
    if (ac.domain() != bc.domain()) {
        ac.to_coeff();
        bc.to_coeff();
    }
    const auto& ctx = *a.context();
    RingElement out(a.context(), ac.domain());
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        for (size_t c = 0; c < ctx.degree(); ++c) out.set(j, c, sub_mod(ac.get(j, c), bc.get(j, c), q));
    }
    return out;
}

inline RingElement ring_neg(const RingElement& a) {
    const auto& ctx = *a.context();
    RingElement out(a.context(), a.domain());
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        for (size_t c = 0; c < ctx.degree(); ++c) {
            u64 v = a.get(j, c);
            out.set(j, c, v == 0 ? 0 : q - v);
        }
    }
    return out;
}

// Negacyclic product, limb-wise through the NTT; falls back to an exact
// O(N^2) convolution when the context has non-NTT primes. Returns a
// coefficient-domain element regardless of input domains.
inline RingElement ring_mul(const RingElement& a, const RingElement& b) {
    detail::require_same_context(a, b);
    const auto& ctx = *a.context();
    if (!ctx.ntt_ready()) {
        RingElement ac = a, bc = b;
        ac.to_coeff();
        bc.to_coeff();
        RingElement out(a.context(), Domain::Coeff);
        size_t n = ctx.degree();
        for (size_t j = 0; j < ctx.prime_count(); ++j) {
            u64 q = ctx.prime(j);
            for (size_t i = 0; i < n; ++i) {
                u64 ai = ac.get(j, i);
                if (ai == 0) continue;
                for (size_t k = 0; k < n; ++k) {
                    u64 term = mul_mod(ai, bc.get(j, k), q);
                    size_t idx = i + k;
                    if (idx < n) {
                        out.set(j, idx, add_mod(out.get(j, idx), term, q));
                    } else {
                        out.set(j, idx - n, sub_mod(out.get(j, idx - n), term, q));
                    }
                }
            }
        }
        return out;
    }
    RingElement ac = a, bc = b;
    ac.to_ntt();
    bc.to_ntt();
    RingElement out(a.context(), Domain::Ntt);
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        for (size_t c = 0; c < ctx.degree(); ++c) out.set(j, c, mul_mod(ac.get(j, c), bc.get(j, c), q));
    }
    out.to_coeff();
    return out;
}

inline RingElement ring_scale(const RingElement& a, u64 scalar) {
    const auto& ctx = *a.context();
    RingElement out(a.context(), a.domain());
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        u64 s = scalar % q;
        for (size_t c = 0; c < ctx.degree(); ++c) out.set(j, c, mul_mod(a.get(j, c), s, q));
    }
    return out;
}

// Centered big-integer coefficients in (-q/2, q/2], reconstructed by CRT.
inline std::vector<BigInt> to_bigint(const RingElement& a) {
    RingElement ac = a;
    ac.to_coeff();
    const auto& ctx = *a.context();
    std::vector<BigInt> out(ctx.degree());
    for (size_t c = 0; c < ctx.degree(); ++c) {
        BigInt acc = 0;
        for (size_t j = 0; j < ctx.prime_count(); ++j) {
            u64 term = mul_mod(ac.get(j, c), ctx.crt_cofactor_inv(j), ctx.prime(j));
            acc += ctx.crt_cofactor(j) * term;
        }
        out[c] = mod_centered(acc, ctx.modulus());
    }
    return out;
}

inline RingElement from_bigint(std::span<const BigInt> coeffs, const ContextPtr& ctx) {
    if (coeffs.size() != ctx->degree()) throw std::invalid_argument("from_bigint: wrong coefficient count");
    RingElement out(ctx, Domain::Coeff);
    for (size_t j = 0; j < ctx->prime_count(); ++j) {
        u64 q = ctx->prime(j);
        for (size_t c = 0; c < ctx->degree(); ++c) out.set(j, c, bigint_to_u64_mod(coeffs[c], q));
    }
    return out;
}

inline RingElement from_constant(const BigInt& value, const ContextPtr& ctx) {
    RingElement out(ctx, Domain::Coeff);
    for (size_t j = 0; j < ctx->prime_count(); ++j) {
        out.set(j, 0, bigint_to_u64_mod(value, ctx->prime(j)));
    }
    return out;
}

// Exact base change: coefficients are lifted centered and reduced in the
// target residue system.
inline RingElement base_convert(const RingElement& a, const ContextPtr& target) {
    auto coeffs = to_bigint(a);
    return from_bigint(coeffs, target);
}

// round((num/den) * a) into `target`, on centered representatives, ties away
// from zero. num and den are exact integers; den > 0.
inline RingElement rescale_round(const RingElement& a, const BigInt& num, const BigInt& den,
                                 const ContextPtr& target) {
    if (den == 0) throw std::invalid_argument("rescale_round: zero denominator");
    if (den < 0) throw std::invalid_argument("rescale_round: denominator must be positive");
    auto coeffs = to_bigint(a);
    for (auto& c : coeffs) c = round_div(num * c, den);
    return from_bigint(coeffs, target);
}

// Largest |centered coefficient|, as an exact integer. Used for noise and
// key-bound measurements.
inline BigInt infinity_norm(const RingElement& a) {
    BigInt best = 0;
    for (const auto& c : to_bigint(a)) {
        BigInt m = c < 0 ? BigInt(-c) : c;
        if (m > best) best = m;
    }
    return best;
}

}  // namespace vmghe

#endif  // VMGHE_RING_HPP

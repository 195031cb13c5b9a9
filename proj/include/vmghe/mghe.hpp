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

#ifndef VMGHE_MGHE_HPP
#define VMGHE_MGHE_HPP

#include <map>

#include "vmghe/ciphertext.hpp"
#include "vmghe/keys.hpp"

namespace vmghe {

using KeyStore = std::map<u32, JointKeys>;

// Delta * M over R_q for a plaintext given as canonical coefficients mod p.
inline RingElement plain_times_delta(std::span<const u64> plain_coeffs, const PublicParams& pp) {
    const auto& ctx = *pp.ctx_q();
    if (plain_coeffs.size() != ctx.degree()) throw std::invalid_argument("plaintext has wrong length");
    RingElement out(pp.ctx_q(), Domain::Coeff);
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        u64 delta_mod = bigint_to_u64_mod(pp.delta(), q);
        for (size_t c = 0; c < ctx.degree(); ++c) {
            out.set(j, c, mul_mod(plain_coeffs[c] % q, delta_mod, q));
        }
    }
    return out;
}

struct EncryptionRandomness {
    RingElement t;
    RingElement e0;
    RingElement e1;
};

// BFV-style encryption under a joint (or individual) encryption key
// (b0, a0):  ct = (t*b0 + Delta*M + e0, t*a0 + e1).
inline MultigroupCiphertext encrypt_with(const RingElement& ek_b0, const RingElement& ek_a0,
                                         u32 group_id, std::span<const u64> plain_coeffs,
                                         const PublicParams& pp, const EncryptionRandomness& rnd) {
    MultigroupCiphertext ct;
    ct.roster = {group_id};
    ct.comps.resize(2, RingElement(pp.ctx_q()));
    ct.comps[0] = ring_add(ring_mul(rnd.t, ek_b0), ring_add(plain_times_delta(plain_coeffs, pp), rnd.e0));
    ct.comps[1] = ring_add(ring_mul(rnd.t, ek_a0), rnd.e1);
    return ct;
}

inline MultigroupCiphertext encrypt(const RingElement& ek_b0, const RingElement& ek_a0, u32 group_id,
                                    std::span<const u64> plain_coeffs, const PublicParams& pp,
                                    Sampler& sampler) {
    EncryptionRandomness rnd{sampler.sample_ternary(pp.ctx_q()), sampler.sample_error(pp.ctx_q()),
                             sampler.sample_error(pp.ctx_q())};
    return encrypt_with(ek_b0, ek_a0, group_id, plain_coeffs, pp, rnd);
}

inline MultigroupCiphertext encrypt(const JointKeys& jk, std::span<const u64> plain_coeffs,
                                    const PublicParams& pp, Sampler& sampler) {
    return encrypt(jk.jek_b0, jk.jek_a0, jk.group_id, plain_coeffs, pp, sampler);
}

// Raw decryption: mu = c_0 + sum_j c_j * s_(group j), then round (p/q) mu.
inline std::vector<u64> decrypt_from_phase(const RingElement& mu, const PublicParams& pp) {
    auto coeffs = to_bigint(mu);
    std::vector<u64> out(coeffs.size());
    const BigInt& q = pp.ctx_q()->modulus();
    for (size_t c = 0; c < coeffs.size(); ++c) {
        out[c] = bigint_to_u64_mod(round_div(coeffs[c] * pp.plain_modulus(), q), pp.plain_modulus());
    }
    return out;
}

// Test oracle: decrypt with the ideal per-group keys sum(s_i). Protocol runs
// never assemble these; they use partial_decrypt/combine_shares below.
inline std::vector<u64> ideal_decrypt(const MultigroupCiphertext& ct,
                                      const std::map<u32, RingElement>& ideal_keys,
                                      const PublicParams& pp) {
    ct.check_shape();
    RingElement mu = ct.comps[0];
    for (size_t i = 0; i < ct.roster.size(); ++i) {
        auto it = ideal_keys.find(ct.roster[i]);
        if (it == ideal_keys.end()) throw std::invalid_argument("ideal_decrypt: missing key for roster group");
        mu = ring_add(mu, ring_mul(ct.comps[i + 1], it->second));
    }
    return decrypt_from_phase(mu, pp);
}

// Largest |centered coefficient| of mu - Delta*M: the effective noise of a
// ciphertext whose plaintext is known. Decryption is exact while this stays
// below Delta/2.
inline BigInt measure_noise(const MultigroupCiphertext& ct, const std::map<u32, RingElement>& ideal_keys,
                            std::span<const u64> plain_coeffs, const PublicParams& pp) {
    RingElement mu = ct.comps[0];
    for (size_t i = 0; i < ct.roster.size(); ++i) {
        mu = ring_add(mu, ring_mul(ct.comps[i + 1], ideal_keys.at(ct.roster[i])));
    }
    return infinity_norm(ring_sub(mu, plain_times_delta(plain_coeffs, pp)));
}

inline MultigroupCiphertext eval_add(const MultigroupCiphertext& a, const MultigroupCiphertext& b) {
    auto roster = roster_union(a.roster, b.roster);
    MultigroupCiphertext ax = align_to_roster(a, roster);
    MultigroupCiphertext bx = align_to_roster(b, roster);
    MultigroupCiphertext out;
    out.roster = roster;
    out.comps.reserve(roster.size() + 1);
    for (size_t i = 0; i <= roster.size(); ++i) out.comps.push_back(ring_add(ax.comps[i], bx.comps[i]));
    return out;
}

// ct + Delta * plain (plaintext addition; applies to the constant slot).
inline MultigroupCiphertext add_plain(const MultigroupCiphertext& ct, std::span<const u64> plain_coeffs,
                                      const PublicParams& pp) {
    MultigroupCiphertext out = ct;
    out.comps[0] = ring_add(out.comps[0], plain_times_delta(plain_coeffs, pp));
    return out;
}

// ct * plain (all components scaled by the plaintext polynomial).
inline MultigroupCiphertext mul_plain(const MultigroupCiphertext& ct, std::span<const u64> plain_coeffs,
                                      const PublicParams& pp) {
    const auto& ctx = *pp.ctx_q();
    RingElement m(pp.ctx_q(), Domain::Coeff);
    for (size_t j = 0; j < ctx.prime_count(); ++j) {
        u64 q = ctx.prime(j);
        for (size_t c = 0; c < ctx.degree(); ++c) m.set(j, c, plain_coeffs[c] % q);
    }
    MultigroupCiphertext out = ct;
    for (auto& comp : out.comps) comp = ring_mul(comp, m);
    return out;
}

namespace detail {

inline const JointKeys& keys_for_group(const KeyStore& keys, u32 group_id) {
    auto it = keys.find(group_id);
    if (it == keys.end()) {
        throw std::invalid_argument("eval_mul: no joint keys for roster group " + std::to_string(group_id));
    }
    return it->second;
}

// The (nu0, nu1, nu2) block binding group `owner` to the reference vector of
// group `target`. In CRS mode there is a single block per owner; in CRS-free
// mode the off-diagonal blocks are the cross-group keys.
struct RelinBlock {
    const std::vector<RingElement>* nu0;
    const std::vector<RingElement>* nu1;
    const std::vector<RingElement>* nu2;
};

inline RelinBlock relin_block(const KeyStore& keys, u32 owner, u32 target, bool crs_free) {
    const JointKeys& jk = keys_for_group(keys, owner);
    if (!crs_free || owner == target) return RelinBlock{&jk.nu0, &jk.nu1, &jk.nu2};
    auto it = jk.cross.find(target);
    if (it == jk.cross.end()) {
        throw std::invalid_argument("eval_mul: missing cross-group keys " + std::to_string(owner) +
                                    " -> " + std::to_string(target));
    }
    return RelinBlock{&it->second.nu0, &it->second.nu1, &it->second.nu2};
}

inline RingElement dot(std::span<const RingElement> a, std::span<const RingElement> b,
                       const ContextPtr& ctx) {
    if (a.size() != b.size()) throw std::logic_error("dot: length mismatch");
    RingElement acc(ctx, Domain::Coeff);
    for (size_t m = 0; m < a.size(); ++m) acc = ring_add(acc, ring_mul(a[m], b[m]));
    return acc;
}

}  // namespace detail

// Combined product and relinearization. Both inputs are first aligned to the
// union roster; every roster group must have joint keys (and, in CRS-free
// mode, cross keys for every other roster group). The steps:
//   (a) c''_j = round((q'/q) c'_j), an encryption of M' at scale q'/p;
//   (b) c*_0  = round((p/q') c_0 c''_0);
//   (c) c*_j  = round((p/q') (c_0 c''_j + c_j c''_0));
//   (d) z     = sum_i h*(c_i) (.) nu2_i;
//   (e) w     = sum_j h*(c''_j) (.) beta_j;
//   (f) c*_j += <h*(c''_j), z>,  and per i:  y_i = <h*(c_i), w>,
//       c*_0 += <h(y_i), nu1_i>,  c*_i += <h(y_i), nu0_i>.
// Cross products are taken over the extended modulus q* = q q' with exact
// centered lifts. Noise exhaustion is not detected here; it only surfaces at
// decryption.
inline MultigroupCiphertext eval_mul(const MultigroupCiphertext& lhs, const MultigroupCiphertext& rhs,
                                     const KeyStore& keys, const PublicParams& pp) {
    bool crs_free = !pp.has_crs();
    auto roster = roster_union(lhs.roster, rhs.roster);
    MultigroupCiphertext a = align_to_roster(lhs, roster);
    MultigroupCiphertext b = align_to_roster(rhs, roster);
    size_t n = roster.size();
    for (u32 g : roster) detail::keys_for_group(keys, g);  // fail loud before any work

    const BigInt& q = pp.ctx_q()->modulus();
    const BigInt& aux = pp.ctx_aux()->modulus();

    // (a) rescale rhs to the auxiliary modulus, then lift everything to q*
    std::vector<RingElement> a_star(n + 1), b_star(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        a_star[i] = base_convert(a.comps[i], pp.ctx_star());
        RingElement rescaled = rescale_round(b.comps[i], aux, q, pp.ctx_aux());
        b_star[i] = base_convert(rescaled, pp.ctx_star());
    }

    // (b), (c) tensor terms involving the constant slot
    MultigroupCiphertext out;
    out.roster = roster;
    out.comps.resize(n + 1, RingElement(pp.ctx_q()));
    out.comps[0] = rescale_round(ring_mul(a_star[0], b_star[0]), pp.plain_modulus(), aux, pp.ctx_q());
    for (size_t j = 1; j <= n; ++j) {
        RingElement cross =
            ring_add(ring_mul(a_star[0], b_star[j]), ring_mul(a_star[j], b_star[0]));
        out.comps[j] = rescale_round(cross, pp.plain_modulus(), aux, pp.ctx_q());
    }
    if (n == 0) return out;

    // extended decompositions, one per nonconstant component of either input
    std::vector<DecomposedElement> ha(n + 1), hb(n + 1);
    for (size_t i = 1; i <= n; ++i) {
        ha[i] = decompose(a_star[i], pp.gadget_star(), pp.ctx_q());
        hb[i] = decompose(b_star[i], pp.gadget_star(), pp.ctx_q());
    }

    size_t k_star = pp.extended_digits();

    if (!crs_free) {
        // (d) z and (e) w are shared across all pairs
        std::vector<RingElement> z(k_star, RingElement(pp.ctx_q()));
        std::vector<RingElement> w(k_star, RingElement(pp.ctx_q()));
        for (size_t i = 1; i <= n; ++i) {
            const JointKeys& jk = detail::keys_for_group(keys, roster[i - 1]);
            for (size_t m = 0; m < k_star; ++m) {
                z[m] = ring_add(z[m], ring_mul(ha[i].components[m], jk.nu2[m]));
                w[m] = ring_add(w[m], ring_mul(hb[i].components[m], jk.beta[m]));
            }
        }
        // (f)
        for (size_t j = 1; j <= n; ++j) {
            out.comps[j] = ring_add(out.comps[j], detail::dot(hb[j].components, z, pp.ctx_q()));
        }
        for (size_t i = 1; i <= n; ++i) {
            const JointKeys& jk = detail::keys_for_group(keys, roster[i - 1]);
            RingElement y = detail::dot(ha[i].components, w, pp.ctx_q());
            DecomposedElement hy = decompose(y, pp.gadget_q());
            out.comps[0] = ring_add(out.comps[0], detail::dot(hy.components, jk.nu1, pp.ctx_q()));
            out.comps[i] = ring_add(out.comps[i], detail::dot(hy.components, jk.nu0, pp.ctx_q()));
        }
        return out;
    }

    // CRS-free: the relinearization target j fixes which reference vector the
    // key material must bind to, so z is recomputed per target and the
    // corrective step uses the (i -> j) cross block.
    for (size_t j = 1; j <= n; ++j) {
        u32 target = roster[j - 1];
        std::vector<RingElement> zj(k_star, RingElement(pp.ctx_q()));
        for (size_t i = 1; i <= n; ++i) {
            auto block = detail::relin_block(keys, roster[i - 1], target, true);
            for (size_t m = 0; m < k_star; ++m) {
                zj[m] = ring_add(zj[m], ring_mul(ha[i].components[m], (*block.nu2)[m]));
            }
        }
        out.comps[j] = ring_add(out.comps[j], detail::dot(hb[j].components, zj, pp.ctx_q()));

        const JointKeys& target_keys = detail::keys_for_group(keys, target);
        std::vector<RingElement> wj(k_star, RingElement(pp.ctx_q()));
        for (size_t m = 0; m < k_star; ++m) wj[m] = ring_mul(hb[j].components[m], target_keys.beta[m]);
        for (size_t i = 1; i <= n; ++i) {
            auto block = detail::relin_block(keys, roster[i - 1], target, true);
            RingElement y = detail::dot(ha[i].components, wj, pp.ctx_q());
            DecomposedElement hy = decompose(y, pp.gadget_q());
            out.comps[0] = ring_add(out.comps[0], detail::dot(hy.components, *block.nu1, pp.ctx_q()));
            out.comps[i] = ring_add(out.comps[i], detail::dot(hy.components, *block.nu0, pp.ctx_q()));
        }
    }
    return out;
}

// One party's decryption share for the slot of its group, with smudging
// noise drawn at sigma'.
inline DecryptionShare partial_decrypt(const MultigroupCiphertext& ct, const SecretKey& sk,
                                       u32 group_id, u32 party_id, const PublicParams& pp,
                                       Sampler& sampler) {
    auto slot = ct.slot_of(group_id);
    if (!slot) throw std::invalid_argument("partial_decrypt: group not in ciphertext roster");
    DecryptionShare share;
    share.group_id = group_id;
    share.party_id = party_id;
    share.mu = ring_add(ring_mul(ct.comps[*slot + 1], sk.s), sampler.sample_smudge(pp.ctx_q()));
    share.ciphertext_digest = ct.digest();
    return share;
}

// Merge: mu = c_0 + sum_j sum_{i in I_j} mu_{j,i}, then round (p/q) mu.
// Every party of every roster group must contribute exactly once, and all
// shares must reference the same ciphertext.
inline std::vector<u64> combine_shares(const MultigroupCiphertext& ct,
                                       const std::vector<DecryptionShare>& shares,
                                       const std::map<u32, std::vector<u32>>& rosters,
                                       const PublicParams& pp) {
    ct.check_shape();
    Digest expect = ct.digest();
    std::map<u32, std::map<u32, const DecryptionShare*>> by_group;
    for (const auto& s : shares) {
        if (s.ciphertext_digest != expect) {
            throw std::invalid_argument("combine_shares: share references a different ciphertext");
        }
        auto [it, fresh] = by_group[s.group_id].emplace(s.party_id, &s);
        if (!fresh) throw std::invalid_argument("combine_shares: duplicate share");
    }
    RingElement mu = ct.comps[0];
    for (u32 g : ct.roster) {
        auto rit = rosters.find(g);
        if (rit == rosters.end()) throw std::invalid_argument("combine_shares: unknown roster group");
        auto git = by_group.find(g);
        size_t have = git == by_group.end() ? 0 : git->second.size();
        if (have != rit->second.size()) {
            throw std::invalid_argument("combine_shares: missing share for group " + std::to_string(g));
        }
        for (u32 party : rit->second) {
            auto pit = git->second.find(party);
            if (pit == git->second.end()) {
                throw std::invalid_argument("combine_shares: missing share from party " + std::to_string(party));
            }
            mu = ring_add(mu, pit->second->mu);
        }
    }
    return decrypt_from_phase(mu, pp);
}

}  // namespace vmghe

#endif  // VMGHE_MGHE_HPP

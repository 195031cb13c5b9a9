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

#ifndef VMGHE_KEYS_HPP
#define VMGHE_KEYS_HPP

#include <map>
#include <optional>

#include "vmghe/params.hpp"

namespace vmghe {

// Marker bytes prefixed to every serialized secret key. Transcript hygiene
// checks scan broadcast payloads for this sequence; it must never appear.
inline constexpr u8 kSecretKeyCanary[8] = {0xC5, 0xEC, 0x4E, 0x7C, 0xAA, 0x91, 0x3B, 0xD6};

struct SecretKey {
    RingElement s;

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::SecretKey);
        w.bytes(std::span<const u8>(kSecretKeyCanary, sizeof(kSecretKeyCanary)));
        w.sized_bytes(s.serialize());
        return w.take();
    }

    static SecretKey deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::SecretKey);
        for (u8 expected : kSecretKeyCanary) {
            if (r.u8_() != expected) throw std::runtime_error("SecretKey: bad canary");
        }
        Bytes inner = r.sized_bytes();
        ByteReader ir(inner);
        return SecretKey{RingElement::deserialize(ir, ctx)};
    }
};

// Per-party encryption key: component 0 of the key vectors.
struct EncryptionKeyShare {
    RingElement b0;
    RingElement a0;
};

// One party's public-key contribution. In CRS mode `b` is computed against
// the common vector; in CRS-free mode it is computed against the group's
// aggregated vector alpha, while `a_own`/`b_own` hold the party's private
// uniform vector and its companion used only for the individual encryption
// key.
struct PublicKeyShare {
    std::vector<RingElement> b;    // k* entries
    std::vector<RingElement> v0;   // k entries, uniform
    std::vector<RingElement> v1;   // k entries
    std::vector<RingElement> v2;   // k* entries
    std::vector<RingElement> a_own;  // k* entries, CRS-free round 1
    std::vector<RingElement> b_own;  // k* entries, CRS-free round 1
    // Generation randomness r_i, kept only for in-process bound checks;
    // never serialized, so it cannot leak into a transcript.
    std::optional<RingElement> r_debug;

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::PublicKeyShare);
        auto put = [&w](const std::vector<RingElement>& v) {
            w.u32_(static_cast<u32>(v.size()));
            for (const auto& e : v) w.sized_bytes(e.serialize());
        };
        put(b);
        put(v0);
        put(v1);
        put(v2);
        put(a_own);
        put(b_own);
        return w.take();
    }

    static PublicKeyShare deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::PublicKeyShare);
        PublicKeyShare out;
        auto get = [&r, &ctx](std::vector<RingElement>& v) {
            u32 n = r.u32_();
            v.reserve(n);
            for (u32 i = 0; i < n; ++i) {
                Bytes inner = r.sized_bytes();
                ByteReader ir(inner);
                v.push_back(RingElement::deserialize(ir, ctx));
            }
        };
        get(out.b);
        get(out.v0);
        get(out.v1);
        get(out.v2);
        get(out.a_own);
        get(out.b_own);
        return out;
    }
};

// Cross-group relinearization material (CRS-free): group members re-derive
// their v-vectors against a foreign group's alpha so that products across
// group boundaries can be relinearized.
struct CrossKeyShare {
    std::vector<RingElement> v0;  // k
    std::vector<RingElement> v1;  // k
    std::vector<RingElement> v2;  // k*

    Bytes serialize() const {
        ByteWriter w;
        auto put = [&w](const std::vector<RingElement>& v) {
            w.u32_(static_cast<u32>(v.size()));
            for (const auto& e : v) w.sized_bytes(e.serialize());
        };
        put(v0);
        put(v1);
        put(v2);
        return w.take();
    }

    static CrossKeyShare deserialize(ByteReader& r, const ContextPtr& ctx) {
        CrossKeyShare out;
        auto get = [&r, &ctx](std::vector<RingElement>& v) {
            u32 n = r.u32_();
            v.reserve(n);
            for (u32 i = 0; i < n; ++i) {
                Bytes inner = r.sized_bytes();
                ByteReader ir(inner);
                v.push_back(RingElement::deserialize(ir, ctx));
            }
        };
        get(out.v0);
        get(out.v1);
        get(out.v2);
        return out;
    }
};

struct CrossJointKeys {
    std::vector<RingElement> nu0;
    std::vector<RingElement> nu1;
    std::vector<RingElement> nu2;
};

// Aggregated keys of one group: component-wise sums of the member shares,
// the joint encryption key, and (CRS-free) the group's alpha plus one
// cross-key block per foreign group.
struct JointKeys {
    u32 group_id = 0;
    std::vector<u32> roster;
    std::vector<RingElement> beta;  // k*
    std::vector<RingElement> nu0;   // k
    std::vector<RingElement> nu1;   // k
    std::vector<RingElement> nu2;   // k*
    RingElement jek_b0;
    RingElement jek_a0;
    std::vector<RingElement> alpha;          // k*, CRS-free only
    std::map<u32, CrossJointKeys> cross;     // CRS-free only, keyed by foreign group
    // Ideal key sum(s_i): test-only handle, never part of broadcast material.
    std::optional<RingElement> ideal_jsk;

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::JointKeys);
        w.u32_(group_id);
        w.u32_(static_cast<u32>(roster.size()));
        for (u32 p : roster) w.u32_(p);
        auto put = [&w](const std::vector<RingElement>& v) {
            w.u32_(static_cast<u32>(v.size()));
            for (const auto& e : v) w.sized_bytes(e.serialize());
        };
        put(beta);
        put(nu0);
        put(nu1);
        put(nu2);
        w.sized_bytes(jek_b0.serialize());
        w.sized_bytes(jek_a0.serialize());
        put(alpha);
        w.u32_(static_cast<u32>(cross.size()));
        for (const auto& [gid, ck] : cross) {
            w.u32_(gid);
            put(ck.nu0);
            put(ck.nu1);
            put(ck.nu2);
        }
        return w.take();
    }

    static JointKeys deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::JointKeys);
        JointKeys out;
        out.group_id = r.u32_();
        out.roster.resize(r.u32_());
        for (auto& p : out.roster) p = r.u32_();
        auto get_elem = [&r, &ctx]() {
            Bytes inner = r.sized_bytes();
            ByteReader ir(inner);
            return RingElement::deserialize(ir, ctx);
        };
        auto get = [&r, &get_elem](std::vector<RingElement>& v) {
            u32 n = r.u32_();
            v.reserve(n);
            for (u32 i = 0; i < n; ++i) v.push_back(get_elem());
        };
        get(out.beta);
        get(out.nu0);
        get(out.nu1);
        get(out.nu2);
        out.jek_b0 = get_elem();
        out.jek_a0 = get_elem();
        get(out.alpha);
        u32 nc = r.u32_();
        for (u32 i = 0; i < nc; ++i) {
            u32 gid = r.u32_();
            CrossJointKeys ck;
            get(ck.nu0);
            get(ck.nu1);
            get(ck.nu2);
            out.cross.emplace(gid, std::move(ck));
        }
        return out;
    }
};

inline SecretKey keygen_secret(const PublicParams& pp, Sampler& sampler) {
    return SecretKey{sampler.sample_ternary(pp.ctx_q())};
}

// CRS-free round 1: the party's own uniform vectors and the companion
// b_own = -s a_own + e. Only component 0 of a_own/b_own feeds the individual
// encryption key; the group keys are built against the aggregated vectors in
// round 2.
struct InitialKeyMaterial {
    std::vector<RingElement> a_own;   // k* entries
    std::vector<RingElement> b_own;   // k* entries
    std::vector<RingElement> v0_own;  // k entries

    Bytes serialize() const {
        ByteWriter w;
        auto put = [&w](const std::vector<RingElement>& v) {
            w.u32_(static_cast<u32>(v.size()));
            for (const auto& e : v) w.sized_bytes(e.serialize());
        };
        put(a_own);
        put(b_own);
        put(v0_own);
        return w.take();
    }

    static InitialKeyMaterial deserialize(ByteReader& r, const ContextPtr& ctx) {
        InitialKeyMaterial out;
        auto get = [&r, &ctx](std::vector<RingElement>& v) {
            u32 n = r.u32_();
            v.reserve(n);
            for (u32 i = 0; i < n; ++i) {
                Bytes inner = r.sized_bytes();
                ByteReader ir(inner);
                v.push_back(RingElement::deserialize(ir, ctx));
            }
        };
        get(out.a_own);
        get(out.b_own);
        get(out.v0_own);
        return out;
    }
};

inline InitialKeyMaterial keygen_party_initial(const PublicParams& pp, const SecretKey& sk,
                                               Sampler& sampler) {
    InitialKeyMaterial out;
    size_t k_star = pp.extended_digits();
    out.a_own.reserve(k_star);
    out.b_own.reserve(k_star);
    for (size_t m = 0; m < k_star; ++m) out.a_own.push_back(sampler.sample_uniform(pp.ctx_q()));
    for (size_t m = 0; m < k_star; ++m) {
        RingElement e = sampler.sample_error(pp.ctx_q());
        out.b_own.push_back(ring_add(ring_neg(ring_mul(sk.s, out.a_own[m])), e));
    }
    out.v0_own.reserve(pp.base_digits());
    for (size_t m = 0; m < pp.base_digits(); ++m) out.v0_own.push_back(sampler.sample_uniform(pp.ctx_q()));
    return out;
}

// CRS mode: party i's uniform v0 contribution, derived from the CRS seed so
// that every party can compute the group aggregate without an extra round.
inline std::vector<RingElement> crs_v0_share(const PublicParams& pp, u32 group_id, u32 party_id) {
    Sampler s(pp.sampler_params(),
              derive_seed(pp.crs_seed(), "v0/" + std::to_string(group_id) + "/" + std::to_string(party_id)));
    std::vector<RingElement> out;
    out.reserve(pp.base_digits());
    for (size_t m = 0; m < pp.base_digits(); ++m) out.push_back(s.sample_uniform(pp.ctx_q()));
    return out;
}

inline std::vector<RingElement> sum_v0_shares(const std::vector<std::vector<RingElement>>& shares) {
    std::vector<RingElement> acc = shares.front();
    for (size_t i = 1; i < shares.size(); ++i) {
        for (size_t m = 0; m < acc.size(); ++m) acc[m] = ring_add(acc[m], shares[i][m]);
    }
    return acc;
}

// Public-key share against a reference vector (the CRS, or the group alpha
// in CRS-free mode) and the group's aggregated nu0:
//   b      = -s * ref + e0
//   v1     = -s * nu0 - r * g + e1
//   v2     = -r * ref + s * round((p/q') g*) + e2
// v1 binds to the group aggregate rather than the party's own v0 summand:
// summing the shares must yield nu1 = -jsk * nu0 - r * g + E, and with
// per-party v0 the cross terms s_i * v0_{i'} would not cancel.
inline PublicKeyShare keygen_party_shared(const PublicParams& pp, const SecretKey& sk,
                                          std::span<const RingElement> reference,
                                          std::span<const RingElement> nu0_aggregate,
                                          std::vector<RingElement> v0_own, Sampler& sampler) {
    size_t k = pp.base_digits();
    size_t k_star = pp.extended_digits();
    if (reference.size() != k_star) throw std::invalid_argument("keygen: reference vector has wrong length");
    if (nu0_aggregate.size() != k || v0_own.size() != k) {
        throw std::invalid_argument("keygen: v0 vector has wrong length");
    }

    PublicKeyShare share;
    RingElement r = sampler.sample_ternary(pp.ctx_q());

    share.b.reserve(k_star);
    for (size_t m = 0; m < k_star; ++m) {
        RingElement e = sampler.sample_error(pp.ctx_q());
        share.b.push_back(ring_add(ring_neg(ring_mul(sk.s, reference[m])), e));
    }
    share.v0 = std::move(v0_own);
    share.v1.reserve(k);
    for (size_t m = 0; m < k; ++m) {
        RingElement e = sampler.sample_error(pp.ctx_q());
        RingElement t = ring_add(ring_mul(sk.s, nu0_aggregate[m]), ring_mul(r, pp.gadget_q().element(m)));
        share.v1.push_back(ring_add(ring_neg(t), e));
    }
    share.v2.reserve(k_star);
    for (size_t m = 0; m < k_star; ++m) {
        RingElement e = sampler.sample_error(pp.ctx_q());
        RingElement t = ring_sub(ring_mul(sk.s, pp.gstar_scaled(m)), ring_mul(r, reference[m]));
        share.v2.push_back(ring_add(t, e));
    }
    share.r_debug = r;
    return share;
}

// Single-call key generation for CRS mode. The party must know its group and
// the roster to derive the aggregated nu0.
struct PartyKeys {
    SecretKey sk;
    PublicKeyShare share;
    EncryptionKeyShare ek;
};

inline PartyKeys keygen_party(const PublicParams& pp, u32 group_id, u32 party_id,
                              const std::vector<u32>& roster, Sampler& sampler) {
    if (!pp.has_crs()) {
        throw std::logic_error("keygen_party: CRS-free mode needs the multi-round key generation");
    }
    std::vector<std::vector<RingElement>> v0_shares;
    v0_shares.reserve(roster.size());
    for (u32 p : roster) v0_shares.push_back(crs_v0_share(pp, group_id, p));
    std::vector<RingElement> nu0 = sum_v0_shares(v0_shares);

    PartyKeys out{keygen_secret(pp, sampler), {}, {}};
    out.share = keygen_party_shared(pp, out.sk, pp.crs(), nu0, crs_v0_share(pp, group_id, party_id),
                                    sampler);
    out.ek = EncryptionKeyShare{out.share.b[0], pp.crs()[0]};
    return out;
}

// CRS-free cross-group material: the public v0 vectors for the (owner ->
// target) block are expanded from a digest of the target group's alpha, so
// no additional broadcast round is needed before the cross shares.
inline std::vector<RingElement> cross_v0_share(const PublicParams& pp, u32 owner_group,
                                               u32 target_group, u32 party_id,
                                               std::span<const RingElement> target_alpha) {
    DigestAccumulator acc;
    acc.update("cross-v0");
    ByteWriter w;
    w.u32_(owner_group);
    w.u32_(target_group);
    w.u32_(party_id);
    acc.update(w.data());
    acc.update(target_alpha[0].serialize());
    Digest d = acc.finish();
    u64 seed = 0;
    for (int i = 0; i < 8; ++i) seed |= static_cast<u64>(d[i]) << (8 * i);
    Sampler s(pp.sampler_params(), seed);
    std::vector<RingElement> out;
    out.reserve(pp.base_digits());
    for (size_t m = 0; m < pp.base_digits(); ++m) out.push_back(s.sample_uniform(pp.ctx_q()));
    return out;
}

// Cross-group share (CRS-free): same v-relations, against the foreign
// group's alpha and the digest-derived v0 aggregate.
inline CrossKeyShare keygen_cross_group(const PublicParams& pp, const SecretKey& sk, u32 owner_group,
                                        u32 target_group, u32 party_id,
                                        const std::vector<u32>& owner_roster,
                                        std::span<const RingElement> foreign_alpha, Sampler& sampler) {
    std::vector<std::vector<RingElement>> v0_shares;
    v0_shares.reserve(owner_roster.size());
    for (u32 p : owner_roster) {
        v0_shares.push_back(cross_v0_share(pp, owner_group, target_group, p, foreign_alpha));
    }
    std::vector<RingElement> nu0 = sum_v0_shares(v0_shares);
    PublicKeyShare tmp =
        keygen_party_shared(pp, sk, foreign_alpha, nu0,
                            cross_v0_share(pp, owner_group, target_group, party_id, foreign_alpha),
                            sampler);
    return CrossKeyShare{std::move(tmp.v0), std::move(tmp.v1), std::move(tmp.v2)};
}

namespace detail {
inline std::vector<RingElement> sum_vectors(const std::vector<const std::vector<RingElement>*>& rows) {
    std::vector<RingElement> acc = *rows.front();
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = *rows[r];
        if (row.size() != acc.size()) throw std::invalid_argument("aggregate: share length mismatch");
        for (size_t m = 0; m < acc.size(); ++m) acc[m] = ring_add(acc[m], row[m]);
    }
    return acc;
}
}  // namespace detail

// Component-wise aggregation of the member shares of one group.
inline JointKeys aggregate_group(u32 group_id, const std::vector<u32>& roster,
                                 const std::vector<PublicKeyShare>& shares, const PublicParams& pp) {
    if (shares.empty()) throw std::invalid_argument("aggregate_group: empty roster");
    if (roster.size() != shares.size()) throw std::invalid_argument("aggregate_group: roster/share mismatch");

    auto collect = [&shares](auto member) {
        std::vector<const std::vector<RingElement>*> rows;
        rows.reserve(shares.size());
        for (const auto& s : shares) rows.push_back(&(s.*member));
        return detail::sum_vectors(rows);
    };

    JointKeys jk;
    jk.group_id = group_id;
    jk.roster = roster;
    jk.beta = collect(&PublicKeyShare::b);
    jk.nu0 = collect(&PublicKeyShare::v0);
    jk.nu1 = collect(&PublicKeyShare::v1);
    jk.nu2 = collect(&PublicKeyShare::v2);

    if (pp.has_crs()) {
        for (const auto& s : shares) {
            if (!s.a_own.empty()) throw std::invalid_argument("aggregate_group: mixed-mode shares");
        }
        jk.jek_b0 = jk.beta[0];
        jk.jek_a0 = pp.crs()[0];
    } else {
        for (const auto& s : shares) {
            if (s.a_own.empty()) throw std::invalid_argument("aggregate_group: missing CRS-free material");
        }
        jk.alpha = collect(&PublicKeyShare::a_own);
        jk.jek_b0 = jk.beta[0];
        jk.jek_a0 = jk.alpha[0];
    }
    return jk;
}

inline CrossJointKeys aggregate_cross_group(const std::vector<CrossKeyShare>& shares) {
    if (shares.empty()) throw std::invalid_argument("aggregate_cross_group: empty share list");
    auto collect = [&shares](auto member) {
        std::vector<const std::vector<RingElement>*> rows;
        rows.reserve(shares.size());
        for (const auto& s : shares) rows.push_back(&(s.*member));
        return detail::sum_vectors(rows);
    };
    return CrossJointKeys{collect(&CrossKeyShare::v0), collect(&CrossKeyShare::v1),
                          collect(&CrossKeyShare::v2)};
}

// Residual norms of the near-linearity relations of an aggregated key:
//   beta + jsk * ref             (error sum)
//   nu1 + jsk * nu0 + r * g      (error sum)
//   nu2 + r * ref - jsk * round((p/q') g*)
// All three stay below |roster| * 6 sigma for honestly generated keys.
struct NearLinearityReport {
    BigInt beta_residual;
    BigInt nu1_residual;
    BigInt nu2_residual;

    bool within(const BigInt& bound) const {
        return beta_residual <= bound && nu1_residual <= bound && nu2_residual <= bound;
    }
};

inline NearLinearityReport check_near_linearity(const JointKeys& jk, const RingElement& jsk,
                                                const RingElement& r_sum,
                                                std::span<const RingElement> reference,
                                                const PublicParams& pp) {
    NearLinearityReport rep;
    rep.beta_residual = 0;
    for (size_t m = 0; m < jk.beta.size(); ++m) {
        BigInt nrm = infinity_norm(ring_add(jk.beta[m], ring_mul(jsk, reference[m])));
        if (nrm > rep.beta_residual) rep.beta_residual = nrm;
    }
    rep.nu1_residual = 0;
    for (size_t m = 0; m < jk.nu1.size(); ++m) {
        RingElement resid = ring_add(jk.nu1[m], ring_add(ring_mul(jsk, jk.nu0[m]),
                                                         ring_mul(r_sum, pp.gadget_q().element(m))));
        BigInt nrm = infinity_norm(resid);
        if (nrm > rep.nu1_residual) rep.nu1_residual = nrm;
    }
    rep.nu2_residual = 0;
    for (size_t m = 0; m < jk.nu2.size(); ++m) {
        RingElement resid = ring_sub(ring_add(jk.nu2[m], ring_mul(r_sum, reference[m])),
                                     ring_mul(jsk, pp.gstar_scaled(m)));
        BigInt nrm = infinity_norm(resid);
        if (nrm > rep.nu2_residual) rep.nu2_residual = nrm;
    }
    return rep;
}

// Decryption share of one party for one ciphertext slot.
struct DecryptionShare {
    u32 group_id = 0;
    u32 party_id = 0;
    RingElement mu;
    Digest ciphertext_digest{};

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::DecryptionShare);
        w.u32_(group_id);
        w.u32_(party_id);
        w.bytes(ciphertext_digest);
        w.sized_bytes(mu.serialize());
        return w.take();
    }

    static DecryptionShare deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::DecryptionShare);
        DecryptionShare out;
        out.group_id = r.u32_();
        out.party_id = r.u32_();
        for (auto& b : out.ciphertext_digest) b = r.u8_();
        Bytes inner = r.sized_bytes();
        ByteReader ir(inner);
        out.mu = RingElement::deserialize(ir, ctx);
        return out;
    }
};

}  // namespace vmghe

#endif  // VMGHE_KEYS_HPP

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

#ifndef VMGHE_AUTHENTICATOR_HPP
#define VMGHE_AUTHENTICATOR_HPP

#include <functional>

#include "vmghe/circuit.hpp"
#include "vmghe/mghe.hpp"

namespace vmghe {

// The secret challenge positions: lambda/2 of the lambda replication slots.
struct ChallengeSet {
    u32 lambda = 0;
    std::vector<u32> indices;  // sorted, exactly lambda/2 entries
    Digest provenance{};       // digest of the generation transcript

    bool contains(u32 slot) const {
        for (u32 i : indices) {
            if (i == slot) return true;
        }
        return false;
    }

    void validate() const {
        if (indices.size() != lambda / 2) throw std::logic_error("challenge set: wrong cardinality");
        for (u32 i : indices) {
            if (i >= lambda) throw std::logic_error("challenge set: index out of range");
        }
    }
};

// One party's SetGen contribution: lambda coin flips.
inline std::vector<u8> setgen_local(u32 lambda, Sampler& sampler) {
    return sampler.random_bits(lambda);
}

// Combine shares into the common challenge set. The XOR of the shares gives
// a lambda-bit mask; since a random mask rarely has exactly lambda/2 ones,
// the mask instead seeds a Fisher-Yates selection of exactly lambda/2
// indices. Deterministic: every party holding the same shares derives the
// same set.
inline ChallengeSet setgen_combine(const std::vector<std::vector<u8>>& shares, u32 lambda,
                                   const Digest& provenance = {}) {
    if (shares.empty()) throw std::invalid_argument("setgen_combine: no shares");
    std::vector<u8> mask(lambda, 0);
    for (const auto& s : shares) {
        if (s.size() != lambda) throw std::invalid_argument("setgen_combine: share length mismatch");
        for (u32 i = 0; i < lambda; ++i) mask[i] ^= (s[i] & 1);
    }
    ByteWriter w;
    w.str("setgen-select");
    w.u32_(lambda);
    w.bytes(mask);
    Digest d = sha256(w.data());
    u64 seed = 0;
    for (int i = 0; i < 8; ++i) seed |= static_cast<u64>(d[i]) << (8 * i);
    Rng rng(seed);

    std::vector<u32> pool(lambda);
    for (u32 i = 0; i < lambda; ++i) pool[i] = i;
    ChallengeSet out;
    out.lambda = lambda;
    out.provenance = provenance;
    for (u32 i = 0; i < lambda / 2; ++i) {
        u32 j = i + static_cast<u32>(rng.below(lambda - i));
        std::swap(pool[i], pool[j]);
        out.indices.push_back(pool[i]);
    }
    std::sort(out.indices.begin(), out.indices.end());
    out.validate();
    return out;
}

// Replication-encoded authenticator: the ciphertext carries the extended
// message (replicas of m, challenges F(tau, j) at the secret positions) and
// the tag eta carries F(tau) for fresh authentications or the hash-tree
// value after evaluation.
struct Authenticator {
    MultigroupCiphertext ct;
    Digest tag{};

    // ciphertext blob followed by the 32-byte tag
    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::Authenticator);
        w.sized_bytes(ct.serialize());
        w.bytes(tag);
        return w.take();
    }

    static Authenticator deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::Authenticator);
        Authenticator out;
        Bytes inner = r.sized_bytes();
        ByteReader ir(inner);
        out.ct = MultigroupCiphertext::deserialize(ir, ctx);
        for (auto& b : out.tag) b = r.u8_();
        return out;
    }
};

// Per-session registry of authenticated (message, label) pairs: a label may
// be re-authenticated with the same message, never with a different one.
class SessionRegistry {
public:
    void record(std::string_view label, std::span<const u64> message) {
        std::string key(label);
        Bytes ser;
        ser.reserve(message.size() * 8);
        for (u64 v : message) {
            for (int i = 0; i < 8; ++i) ser.push_back(static_cast<u8>(v >> (8 * i)));
        }
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            entries_.emplace(std::move(key), std::move(ser));
        } else if (it->second != ser) {
            throw std::invalid_argument("label '" + key + "' already authenticates a different message");
        }
    }

    bool known(std::string_view label) const { return entries_.count(std::string(label)) > 0; }

private:
    std::map<std::string, Bytes> entries_;
};

// Extended replication vector for a block of scalars: block b occupies slots
// [b*lambda, (b+1)*lambda); challenge slots hold F(tau, j), the rest hold
// the block's scalar. Slots past the blocks replicate the last scalar so the
// whole plaintext stays well-formed.
inline std::vector<u64> replication_encode(std::span<const u64> scalars, std::string_view label,
                                           const ChallengeSet& set, const Prf& prf,
                                           const PublicParams& pp) {
    u32 lambda = pp.lambda();
    if (scalars.empty()) throw std::invalid_argument("auth: empty message");
    if (scalars.size() * lambda > pp.encoder().slot_count()) {
        throw std::invalid_argument("auth: message blocks exceed slot capacity");
    }
    std::vector<u64> challenges(lambda, 0);
    for (u32 j : set.indices) challenges[j] = prf.challenge(label, j, pp.plain_modulus());

    std::vector<u64> slots(pp.encoder().slot_count(), scalars.back() % pp.plain_modulus());
    for (size_t b = 0; b < scalars.size(); ++b) {
        for (u32 j = 0; j < lambda; ++j) {
            slots[b * lambda + j] = set.contains(j) ? challenges[j] : scalars[b] % pp.plain_modulus();
        }
    }
    return slots;
}

inline Authenticator auth(std::span<const u64> scalars, std::string_view label, const JointKeys& jek,
                          const ChallengeSet& set, const Prf& prf, const PublicParams& pp,
                          Sampler& sampler, SessionRegistry& registry) {
    check_label(label);
    registry.record(label, scalars);
    auto slots = replication_encode(scalars, label, set, prf, pp);
    auto coeffs = pp.encoder().encode(std::move(slots));
    Authenticator out;
    out.ct = encrypt(jek, coeffs, pp, sampler);
    out.tag = prf.tag(label);
    return out;
}

inline Authenticator auth(u64 scalar, std::string_view label, const JointKeys& jek,
                          const ChallengeSet& set, const Prf& prf, const PublicParams& pp,
                          Sampler& sampler, SessionRegistry& registry) {
    u64 m[1] = {scalar};
    return auth(std::span<const u64>(m, 1), label, jek, set, prf, pp, sampler, registry);
}

// Homomorphic evaluation over authenticated inputs: the ciphertext side runs
// the circuit through eval_add/eval_mul (slot-wise semantics), the tag side
// runs the hash tree over the input tags.
inline Authenticator eval_authenticated(const LabeledProgram& program,
                                        std::span<const Authenticator> inputs, const KeyStore& keys,
                                        const PublicParams& pp) {
    program.validate();
    if (inputs.size() != program.circuit.input_count()) {
        throw std::invalid_argument("eval: one authenticator per input wire required");
    }
    if (program.circuit.mult_depth() > 2) {
        throw std::invalid_argument("eval: circuit multiplication depth exceeds the preset budget");
    }

    struct Value {
        bool is_plain = false;
        u64 scalar = 0;
        MultigroupCiphertext ct;
    };
    const auto& gates = program.circuit.gates();
    std::vector<Value> vals(gates.size());
    for (size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        switch (g.kind) {
            case GateKind::Input:
                vals[i].ct = inputs[g.value].ct;
                break;
            case GateKind::Const:
                vals[i].is_plain = true;
                vals[i].scalar = g.value % pp.plain_modulus();
                break;
            case GateKind::Add:
            case GateKind::Mul: {
                const Value& a = vals[g.left];
                const Value& b = vals[g.right];
                bool mul = g.kind == GateKind::Mul;
                if (a.is_plain && b.is_plain) {
                    vals[i].is_plain = true;
                    vals[i].scalar = mul ? mul_mod(a.scalar, b.scalar, pp.plain_modulus())
                                         : add_mod(a.scalar, b.scalar, pp.plain_modulus());
                } else if (a.is_plain || b.is_plain) {
                    const Value& ct_side = a.is_plain ? b : a;
                    u64 scalar = a.is_plain ? a.scalar : b.scalar;
                    auto plain = pp.encoder().encode_constant(scalar);
                    vals[i].ct = mul ? mul_plain(ct_side.ct, plain, pp) : add_plain(ct_side.ct, plain, pp);
                } else {
                    vals[i].ct = mul ? eval_mul(a.ct, b.ct, keys, pp) : eval_add(a.ct, b.ct);
                }
                break;
            }
        }
    }
    if (vals.back().is_plain) {
        throw std::invalid_argument("eval: program output does not depend on any authenticated input");
    }

    std::vector<Digest> leaf_tags;
    leaf_tags.reserve(inputs.size());
    for (const auto& in : inputs) leaf_tags.push_back(in.tag);
    return Authenticator{std::move(vals.back().ct), program.circuit.hash_tree(leaf_tags)};
}

enum class VerifyStatus : u8 {
    Accept = 0,
    TagMismatch = 1,
    ChallengeMismatch = 2,
    ReplicaMismatch = 3,
    DecryptionFailure = 4,
};

inline std::string to_string(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::Accept: return "accept";
        case VerifyStatus::TagMismatch: return "tag-mismatch";
        case VerifyStatus::ChallengeMismatch: return "challenge-mismatch";
        case VerifyStatus::ReplicaMismatch: return "replica-mismatch";
        case VerifyStatus::DecryptionFailure: return "decryption-failure";
    }
    return "?";
}

struct VerifyResult {
    VerifyStatus status = VerifyStatus::DecryptionFailure;
    std::vector<u64> values;  // accepted output, one scalar per block

    bool accepted() const { return status == VerifyStatus::Accept; }
    u64 value() const {
        if (!accepted() || values.empty()) throw std::logic_error("no accepted value");
        return values[0];
    }
};

// Decrypts through the caller-chosen path: ideal keys in tests, distributed
// shares in protocol runs.
using DecryptFn = std::function<std::vector<u64>(const MultigroupCiphertext&)>;

// The four checks, in order:
//  1. offline: challenge outputs r_j = f(F(tau_k, j)) for every j in S;
//  2. tag: eta* = f^H(F(tau_1), ..., F(tau_n)) must equal the claimed tag;
//  3. challenge slots of the decrypted vector must equal the r_j;
//  4. all remaining slots must agree on a single value per block.
inline VerifyResult verify(const LabeledProgram& program, const Authenticator& result,
                           const ChallengeSet& set, const Prf& prf, const DecryptFn& decrypt,
                           const PublicParams& pp, size_t blocks = 1) {
    program.validate();
    set.validate();
    u32 lambda = set.lambda;
    size_t n = program.labels.size();

    // (1) offline challenge evaluation
    std::map<u32, u64> expected_challenge;
    for (u32 j : set.indices) {
        std::vector<u64> challenge_inputs(n);
        for (size_t k = 0; k < n; ++k) {
            challenge_inputs[k] = prf.challenge(program.labels[k], j, pp.plain_modulus());
        }
        expected_challenge[j] = program.circuit.eval_zp(challenge_inputs, pp.plain_modulus());
    }

    // (2) tag recomputation
    if (program.tag_for(prf) != result.tag) return VerifyResult{VerifyStatus::TagMismatch, {}};

    // (3) decrypt and check challenge slots
    std::vector<u64> coeffs;
    try {
        coeffs = decrypt(result.ct);
    } catch (const std::exception&) {
        return VerifyResult{VerifyStatus::DecryptionFailure, {}};
    }
    auto slots = pp.encoder().decode(std::move(coeffs));
    for (size_t b = 0; b < blocks; ++b) {
        for (u32 j : set.indices) {
            if (slots[b * lambda + j] != expected_challenge[j]) {
                return VerifyResult{VerifyStatus::ChallengeMismatch, {}};
            }
        }
    }

    // (4) replica agreement
    VerifyResult out;
    out.status = VerifyStatus::Accept;
    for (size_t b = 0; b < blocks; ++b) {
        bool have = false;
        u64 value = 0;
        for (u32 j = 0; j < lambda; ++j) {
            if (set.contains(j)) continue;
            u64 v = slots[b * lambda + j];
            if (!have) {
                value = v;
                have = true;
            } else if (v != value) {
                return VerifyResult{VerifyStatus::ReplicaMismatch, {}};
            }
        }
        out.values.push_back(value);
    }
    return out;
}

}  // namespace vmghe

#endif  // VMGHE_AUTHENTICATOR_HPP

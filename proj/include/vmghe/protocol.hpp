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

#ifndef VMGHE_PROTOCOL_HPP
#define VMGHE_PROTOCOL_HPP

#include <chrono>
#include <istream>
#include <sstream>

#include "vmghe/authenticator.hpp"

namespace vmghe::protocol {

// Broadcast is modeled as a reliable, ordered, authenticated channel: every
// record lands in the transcript and every party reads the same bytes (the
// one exception being the explicit tamper hooks). Rounds are lock-step.

struct GroupSpec {
    u32 id = 0;
    std::vector<u32> parties;
};

struct SessionConfig {
    std::vector<GroupSpec> groups;
    std::string preset = "TEST-S";
    SchemeMode mode = SchemeMode::Crs;
    u32 lambda = 0;  // 0 keeps the preset default
    u64 master_seed = 1;

    void validate() const {
        if (groups.empty()) throw std::invalid_argument("session: no groups");
        std::vector<u32> seen_groups, seen_parties;
        for (const auto& g : groups) {
            if (g.parties.empty()) throw std::invalid_argument("session: empty group roster");
            for (u32 gid : seen_groups) {
                if (gid == g.id) throw std::invalid_argument("session: duplicate group id");
            }
            seen_groups.push_back(g.id);
            for (u32 p : g.parties) {
                for (u32 q : seen_parties) {
                    if (p == q) throw std::invalid_argument("session: party appears in two rosters");
                }
                seen_parties.push_back(p);
            }
        }
    }

    std::vector<u32> all_parties() const {
        std::vector<u32> out;
        for (const auto& g : groups) out.insert(out.end(), g.parties.begin(), g.parties.end());
        return out;
    }

    u32 group_of(u32 party) const {
        for (const auto& g : groups) {
            for (u32 p : g.parties) {
                if (p == party) return g.id;
            }
        }
        throw std::invalid_argument("session: unknown party");
    }

    Bytes serialize() const {
        ByteWriter w;
        w.str(preset);
        w.u8_(static_cast<u8>(mode));
        w.u32_(lambda);
        w.u64_(master_seed);
        w.u32_(static_cast<u32>(groups.size()));
        for (const auto& g : groups) {
            w.u32_(g.id);
            w.u32_(static_cast<u32>(g.parties.size()));
            for (u32 p : g.parties) w.u32_(p);
        }
        return w.take();
    }

    Digest digest() const { return sha256(serialize()); }
};

struct TranscriptRecord {
    u32 round = 0;
    u32 sender = 0;
    std::string type;
    Bytes payload;
};

class Transcript {
public:
    void set_session_digest(const Digest& d) { session_digest_ = d; }
    const Digest& session_digest() const { return session_digest_; }

    void append(u32 round, u32 sender, std::string type, Bytes payload) {
        records_.push_back(TranscriptRecord{round, sender, std::move(type), std::move(payload)});
    }

    const std::vector<TranscriptRecord>& records() const { return records_; }

    Digest digest() const {
        DigestAccumulator acc;
        acc.update(session_digest_);
        for (const auto& r : records_) {
            ByteWriter w;
            w.u32_(r.round);
            w.u32_(r.sender);
            w.str(r.type);
            w.sized_bytes(r.payload);
            acc.update(w.data());
        }
        return acc.finish();
    }

    // One record per line: round, sender, type, hex payload.
    std::string to_text() const {
        std::ostringstream out;
        out << "vmghe-transcript v1 session=" << to_hex(session_digest_) << "\n";
        for (const auto& r : records_) {
            out << r.round << " " << r.sender << " " << r.type << " " << to_hex(r.payload) << "\n";
        }
        return out.str();
    }

    static Transcript from_text(std::istream& in) {
        Transcript t;
        std::string header;
        if (!std::getline(in, header)) throw std::runtime_error("transcript: empty input");
        auto pos = header.find("session=");
        if (header.rfind("vmghe-transcript v1", 0) != 0 || pos == std::string::npos) {
            throw std::runtime_error("transcript: bad header");
        }
        Bytes digest_bytes = from_hex(header.substr(pos + 8));
        if (digest_bytes.size() != t.session_digest_.size()) throw std::runtime_error("transcript: bad digest");
        std::copy(digest_bytes.begin(), digest_bytes.end(), t.session_digest_.begin());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            TranscriptRecord r;
            std::string hex;
            if (!(ls >> r.round >> r.sender >> r.type >> hex)) {
                throw std::runtime_error("transcript: malformed record line");
            }
            r.payload = from_hex(hex);
            t.records_.push_back(std::move(r));
        }
        return t;
    }

    // Hygiene scan: true if `needle` occurs in any record payload.
    bool contains_bytes(std::span<const u8> needle) const {
        for (const auto& r : records_) {
            if (r.payload.size() < needle.size()) continue;
            for (size_t i = 0; i + needle.size() <= r.payload.size(); ++i) {
                if (std::equal(needle.begin(), needle.end(), r.payload.begin() + i)) return true;
            }
        }
        return false;
    }

private:
    std::vector<TranscriptRecord> records_;
    Digest session_digest_{};
};

class SetGenDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShareTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PartyState {
    u32 id = 0;
    u32 group = 0;
    SecretKey sk;
    Sampler sampler;
};

struct KeygenResult {
    ParamsPtr pp;
    KeyStore keys;
    std::vector<PartyState> parties;
    std::map<u32, EncryptionKeyShare> encryption_keys;  // per party
    std::map<u32, std::vector<u32>> rosters;
    u32 rounds = 0;

    PartyState& party(u32 id) {
        for (auto& p : parties) {
            if (p.id == id) return p;
        }
        throw std::out_of_range("no such party");
    }

    // Advisory ideal keys (sum of member secrets); used only for noise
    // telemetry and test oracles, never broadcast.
    std::map<u32, RingElement> ideal_keys() const {
        std::map<u32, RingElement> out;
        for (const auto& [gid, roster] : rosters) {
            RingElement acc(pp->ctx_q());
            for (const auto& p : parties) {
                if (p.group == gid) acc = ring_add(acc, p.sk.s);
            }
            out.emplace(gid, std::move(acc));
        }
        return out;
    }
};

// KeyGen protocol. CRS mode: one broadcast round of public-key shares, then
// local aggregation. CRS-free: three lock-step rounds — (1) per-party
// uniform vectors, (2) shares against the aggregated alpha plus the jek
// broadcasts, (3) cross-group shares against every foreign alpha.
inline KeygenResult run_keygen(const SessionConfig& cfg, Transcript& transcript) {
    cfg.validate();
    PresetSpec spec = PresetSpec::by_name(cfg.preset);
    if (cfg.lambda != 0) spec.lambda = cfg.lambda;
    KeygenResult out;
    out.pp = setup(spec, cfg.mode, derive_seed(cfg.master_seed, "crs"));
    const PublicParams& pp = *out.pp;

    for (const auto& g : cfg.groups) {
        out.rosters.emplace(g.id, g.parties);
        for (u32 pid : g.parties) {
            Sampler sampler(pp.sampler_params(),
                            derive_seed(cfg.master_seed, "party/" + std::to_string(pid)));
            out.parties.push_back(PartyState{pid, g.id, SecretKey{}, std::move(sampler)});
        }
    }

    if (pp.has_crs()) {
        std::map<u32, std::vector<PublicKeyShare>> shares_by_group;
        for (auto& p : out.parties) {
            PartyKeys pk = keygen_party(pp, p.group, p.id, out.rosters.at(p.group), p.sampler);
            p.sk = pk.sk;
            out.encryption_keys.emplace(p.id, pk.ek);
            transcript.append(1, p.id, "keygen.pk", pk.share.serialize());
            shares_by_group[p.group].push_back(std::move(pk.share));
        }
        for (const auto& g : cfg.groups) {
            out.keys.emplace(g.id, aggregate_group(g.id, g.parties, shares_by_group.at(g.id), pp));
        }
        out.rounds = 1;
        return out;
    }

    // round 1: individual uniform vectors (and the own-a companion feeding
    // the individual encryption keys)
    std::map<u32, InitialKeyMaterial> initials;
    for (auto& p : out.parties) {
        p.sk = keygen_secret(pp, p.sampler);
        InitialKeyMaterial init = keygen_party_initial(pp, p.sk, p.sampler);
        transcript.append(1, p.id, "keygen.init", init.serialize());
        out.encryption_keys.emplace(p.id, EncryptionKeyShare{init.b_own[0], init.a_own[0]});
        initials.emplace(p.id, std::move(init));
    }

    // aggregates are derived from round-1 broadcasts
    std::map<u32, std::vector<RingElement>> alpha, nu0;
    for (const auto& g : cfg.groups) {
        std::vector<RingElement> a_acc(pp.extended_digits(), RingElement(pp.ctx_q()));
        std::vector<RingElement> v_acc(pp.base_digits(), RingElement(pp.ctx_q()));
        for (u32 pid : g.parties) {
            const auto& init = initials.at(pid);
            for (size_t m = 0; m < a_acc.size(); ++m) a_acc[m] = ring_add(a_acc[m], init.a_own[m]);
            for (size_t m = 0; m < v_acc.size(); ++m) v_acc[m] = ring_add(v_acc[m], init.v0_own[m]);
        }
        alpha.emplace(g.id, std::move(a_acc));
        nu0.emplace(g.id, std::move(v_acc));
    }

    // round 2: shares against the group alpha, plus the jek broadcasts
    std::map<u32, std::vector<PublicKeyShare>> shares_by_group;
    for (auto& p : out.parties) {
        PublicKeyShare share = keygen_party_shared(pp, p.sk, alpha.at(p.group), nu0.at(p.group),
                                                   initials.at(p.id).v0_own, p.sampler);
        share.a_own = initials.at(p.id).a_own;
        share.b_own = initials.at(p.id).b_own;
        transcript.append(2, p.id, "keygen.pk", share.serialize());
        shares_by_group[p.group].push_back(std::move(share));
    }
    for (const auto& g : cfg.groups) {
        JointKeys jk = aggregate_group(g.id, g.parties, shares_by_group.at(g.id), pp);
        ByteWriter w;
        w.sized_bytes(jk.jek_b0.serialize());
        w.sized_bytes(jk.jek_a0.serialize());
        transcript.append(2, g.parties.front(), "keygen.jek", w.take());
        out.keys.emplace(g.id, std::move(jk));
    }

    // round 3: cross-group shares
    for (const auto& g : cfg.groups) {
        for (const auto& target : cfg.groups) {
            if (target.id == g.id) continue;
            std::vector<CrossKeyShare> cross_shares;
            for (u32 pid : g.parties) {
                auto& p = out.party(pid);
                CrossKeyShare cs = keygen_cross_group(pp, p.sk, g.id, target.id, pid, g.parties,
                                                      alpha.at(target.id), p.sampler);
                ByteWriter w;
                w.u32_(target.id);
                w.sized_bytes(cs.serialize());
                transcript.append(3, pid, "keygen.cross", w.take());
                cross_shares.push_back(std::move(cs));
            }
            out.keys.at(g.id).cross.emplace(target.id, aggregate_cross_group(cross_shares));
        }
    }
    out.rounds = 3;
    return out;
}

// Channel-fault injection for SetGen: flip one bit of the n-th setgen.share
// payload as read by one victim party.
struct SetGenTamper {
    u32 victim = 0;
    size_t record_index = 0;  // among setgen.share records of the attempt
    size_t bit = 0;           // offset from the end of the payload, in bits
};

struct SetGenResult {
    ChallengeSet set;
    u32 attempts = 0;
};

inline SetGenResult run_setgen(const SessionConfig& cfg, KeygenResult& kg, Transcript& transcript,
                               const SetGenTamper* tamper = nullptr) {
    const PublicParams& pp = *kg.pp;
    u32 lambda = pp.lambda();
    auto parties = cfg.all_parties();
    constexpr u32 kMaxAttempts = 3;

    for (u32 attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        u32 round = 100 * attempt;
        // every party draws a fresh share and encrypts it to every peer
        std::map<u32, std::vector<u8>> own_share;
        struct Delivery {
            u32 sender;
            u32 target;
            Bytes ct_blob;
        };
        std::vector<Delivery> deliveries;
        size_t share_record_index = 0;
        for (u32 pid : parties) {
            auto& p = kg.party(pid);
            own_share.emplace(pid, setgen_local(lambda, p.sampler));
            std::vector<u64> slots(pp.encoder().slot_count(), 0);
            for (u32 j = 0; j < lambda; ++j) slots[j] = own_share.at(pid)[j];
            auto coeffs = pp.encoder().encode(std::move(slots));
            for (u32 target : parties) {
                if (target == pid) continue;
                const auto& ek = kg.encryption_keys.at(target);
                MultigroupCiphertext ct =
                    encrypt(ek.b0, ek.a0, cfg.group_of(target), coeffs, pp, p.sampler);
                ByteWriter w;
                w.u32_(target);
                w.sized_bytes(ct.serialize());
                Bytes payload = w.take();
                transcript.append(round, pid, "setgen.share", payload);
                Bytes delivered = payload;
                if (tamper != nullptr && share_record_index == tamper->record_index &&
                    target == tamper->victim) {
                    // corrupt the copy the victim reads; the channel stays
                    // intact for everyone else
                    size_t byte_off = delivered.size() - 1 - tamper->bit / 8;
                    delivered[byte_off] ^= static_cast<u8>(1u << (tamper->bit % 8));
                }
                ByteReader r(delivered);
                r.u32_();
                deliveries.push_back(Delivery{pid, target, r.sized_bytes()});
                ++share_record_index;
            }
        }

        // decryption and combination, per party
        std::map<u32, std::optional<ChallengeSet>> derived;
        std::map<u32, std::vector<u32>> invalid_senders;
        Digest provenance = transcript.digest();
        for (u32 pid : parties) {
            auto& p = kg.party(pid);
            std::map<u32, std::vector<u8>> shares;
            shares.emplace(pid, own_share.at(pid));
            bool ok = true;
            for (const auto& d : deliveries) {
                if (d.target != pid) continue;
                std::vector<u8> bits(lambda);
                bool valid = true;
                try {
                    ByteReader r(d.ct_blob);
                    MultigroupCiphertext ct = MultigroupCiphertext::deserialize(r, pp.ctx_q());
                    RingElement mu = ring_add(ct.comps[0], ring_mul(ct.comps[1], p.sk.s));
                    auto slots = pp.encoder().decode(decrypt_from_phase(mu, pp));
                    for (u32 j = 0; j < lambda; ++j) {
                        if (slots[j] > 1) {
                            valid = false;
                            break;
                        }
                        bits[j] = static_cast<u8>(slots[j]);
                    }
                } catch (const std::exception&) {
                    valid = false;
                }
                if (!valid) {
                    invalid_senders[pid].push_back(d.sender);
                    ok = false;
                    continue;
                }
                shares.emplace(d.sender, std::move(bits));
            }
            if (ok) {
                std::vector<std::vector<u8>> ordered;
                for (u32 q : parties) ordered.push_back(shares.at(q));
                derived[pid] = setgen_combine(ordered, lambda, provenance);
            }
        }

        bool all_ok = true;
        for (u32 pid : parties) all_ok &= derived[pid].has_value();
        if (all_ok) {
            const ChallengeSet& first = *derived[parties.front()];
            for (u32 pid : parties) {
                if (derived[pid]->indices != first.indices) {
                    throw SetGenDivergence("parties derived different challenge sets (party " +
                                           std::to_string(pid) + " disagrees)");
                }
            }
            return SetGenResult{first, attempt};
        }

        // decryption trouble: if every affected reading points at the same
        // senders for every party, treat it as noise overflow and resample;
        // partial disagreement means the parties no longer share a view
        std::vector<u32> complaining;
        for (auto& [pid, senders] : invalid_senders) complaining.push_back(pid);
        bool unanimous = complaining.size() == parties.size();
        if (!unanimous) {
            std::string who;
            for (u32 pid : complaining) who += " " + std::to_string(pid);
            throw SetGenDivergence("parties disagree after share decryption (invalid readings at" + who +
                                   ")");
        }
        transcript.append(round, parties.front(), "setgen.retry", Bytes{});
    }
    throw std::runtime_error("setgen: decryption noise overflow persisted after retries");
}

// Distributed decryption of one ciphertext: a round of partial shares, a
// round of per-group sums, then a local merge. Withholding a share is
// detected and surfaced as a timeout, never as a wrong plaintext.
struct WithholdShare {
    u32 party = 0;
};

inline std::vector<u64> run_distributed_decrypt(const SessionConfig& cfg, KeygenResult& kg,
                                                const MultigroupCiphertext& ct, Transcript& transcript,
                                                u32 round_base = 500,
                                                const WithholdShare* withhold = nullptr) {
    const PublicParams& pp = *kg.pp;
    std::vector<DecryptionShare> shares;
    std::map<u32, std::vector<u32>> needed;
    for (u32 gid : ct.roster) needed.emplace(gid, kg.rosters.at(gid));

    for (const auto& [gid, roster] : needed) {
        for (u32 pid : roster) {
            if (withhold != nullptr && withhold->party == pid) continue;
            auto& p = kg.party(pid);
            DecryptionShare s = partial_decrypt(ct, p.sk, gid, pid, pp, p.sampler);
            transcript.append(round_base, pid, "decrypt.partial", s.serialize());
            shares.push_back(std::move(s));
        }
    }
    for (const auto& [gid, roster] : needed) {
        for (u32 pid : roster) {
            if (withhold != nullptr && withhold->party == pid) {
                throw ShareTimeout("timed out waiting for decryption share from party " +
                                   std::to_string(pid));
            }
        }
    }
    // per-group sums, broadcast by every member as merged material
    for (const auto& [gid, roster] : needed) {
        RingElement mu_group(pp.ctx_q());
        for (const auto& s : shares) {
            if (s.group_id == gid) mu_group = ring_add(mu_group, s.mu);
        }
        ByteWriter w;
        w.u32_(gid);
        w.sized_bytes(mu_group.serialize());
        Bytes payload = w.take();
        for (u32 pid : roster) transcript.append(round_base + 1, pid, "decrypt.group", payload);
    }
    return combine_shares(ct, shares, needed, pp);
}

enum class TamperKind : u8 {
    None = 0,
    WrongCircuit,
    SlotSubstitute,
    AdditiveNoise,
    StaleLabel,
    CiphertextSwap,
    ConstantOutput,
};

inline std::string to_string(TamperKind k) {
    switch (k) {
        case TamperKind::None: return "none";
        case TamperKind::WrongCircuit: return "wrong-circuit";
        case TamperKind::SlotSubstitute: return "slot-substitute";
        case TamperKind::AdditiveNoise: return "additive-noise";
        case TamperKind::StaleLabel: return "stale-label";
        case TamperKind::CiphertextSwap: return "ciphertext-swap";
        case TamperKind::ConstantOutput: return "constant-output";
    }
    return "?";
}

inline TamperKind tamper_from_string(const std::string& s) {
    for (TamperKind k : {TamperKind::None, TamperKind::WrongCircuit, TamperKind::SlotSubstitute,
                         TamperKind::AdditiveNoise, TamperKind::StaleLabel, TamperKind::CiphertextSwap,
                         TamperKind::ConstantOutput}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown tamper directive: " + s);
}

struct SessionInput {
    std::string label;
    u64 value = 0;
    u32 group = 0;
};

struct SessionResult {
    VerifyResult verdict;
    u64 expected = 0;        // plaintext oracle over the honest inputs
    bool oracle_match = false;
    TamperKind tamper = TamperKind::None;
    ChallengeSet set;
    Transcript transcript;
    BigInt noise;            // advisory telemetry via the ideal keys
    BigInt noise_budget;     // Delta / 2
    double keygen_ms = 0, setgen_ms = 0, eval_ms = 0, decrypt_ms = 0, verify_ms = 0;
    u32 setgen_attempts = 1;
};

// Full pipeline: keygen, setgen, per-input authentication, server-side
// evaluation (honest or tampered), distributed decryption, verification.
inline SessionResult run_session(const SessionConfig& cfg, const LabeledProgram& program,
                                 const std::vector<SessionInput>& inputs,
                                 TamperKind tamper = TamperKind::None) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    cfg.validate();
    program.validate();
    if (inputs.size() != program.labels.size()) {
        throw std::invalid_argument("session: one input assignment per program label required");
    }
    for (size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].label != program.labels[i]) {
            throw std::invalid_argument("session: input order must match program labels");
        }
    }

    SessionResult out;
    out.tamper = tamper;
    out.transcript.set_session_digest(cfg.digest());

    auto t0 = clock::now();
    KeygenResult kg = run_keygen(cfg, out.transcript);
    out.keygen_ms = ms_since(t0);
    const PublicParams& pp = *kg.pp;

    t0 = clock::now();
    SetGenResult sg = run_setgen(cfg, kg, out.transcript);
    out.setgen_ms = ms_since(t0);
    out.set = sg.set;
    out.setgen_attempts = sg.attempts;

    // parties hold the session PRF key; the server never sees it
    Prf prf = Prf::from_seed(cfg.master_seed, "session-prf");
    SessionRegistry registry;

    t0 = clock::now();
    std::vector<Authenticator> authenticated;
    for (const auto& in : inputs) {
        u32 owner = kg.rosters.at(in.group).front();
        auto& p = kg.party(owner);
        Authenticator g = auth(in.value, in.label, kg.keys.at(in.group), sg.set, prf, pp, p.sampler,
                               registry);
        ByteWriter w;
        w.str(in.label);
        w.sized_bytes(g.serialize());
        out.transcript.append(400, owner, "auth", w.take());
        authenticated.push_back(std::move(g));
    }

    // the simulated server
    Rng adversary(derive_seed(cfg.master_seed, "adversary"));
    LabeledProgram claimed = program;
    Authenticator result;
    switch (tamper) {
        case TamperKind::None:
            result = eval_authenticated(program, authenticated, kg.keys, pp);
            break;
        case TamperKind::WrongCircuit: {
            // the server runs f + 1 instead of f and reports that honestly
            LabeledProgram actual = program;
            u32 one = actual.circuit.add_const(1);
            actual.circuit.add_gate(GateKind::Add, static_cast<u32>(actual.circuit.gate_count() - 2),
                                    one);
            result = eval_authenticated(actual, authenticated, kg.keys, pp);
            break;
        }
        case TamperKind::SlotSubstitute: {
            result = eval_authenticated(program, authenticated, kg.keys, pp);
            // guess a lambda/2 subset and shift every other replication slot
            u32 lambda = pp.lambda();
            std::vector<u32> pool(lambda);
            for (u32 i = 0; i < lambda; ++i) pool[i] = i;
            for (u32 i = 0; i < lambda / 2; ++i) {
                u32 j = i + static_cast<u32>(adversary.below(lambda - i));
                std::swap(pool[i], pool[j]);
            }
            std::vector<u64> bump(pp.encoder().slot_count(), 0);
            u64 delta = 1 + adversary.below(pp.plain_modulus() - 1);
            for (u32 j = 0; j < lambda; ++j) {
                bool guessed_challenge = false;
                for (u32 i = 0; i < lambda / 2; ++i) guessed_challenge |= (pool[i] == j);
                if (!guessed_challenge) bump[j] = delta;
            }
            result.ct = add_plain(result.ct, pp.encoder().encode(std::move(bump)), pp);
            break;
        }
        case TamperKind::AdditiveNoise: {
            result = eval_authenticated(program, authenticated, kg.keys, pp);
            std::vector<u64> bump(pp.encoder().slot_count(), 0);
            bump[adversary.below(pp.lambda())] = 1 + adversary.below(pp.plain_modulus() - 1);
            result.ct = add_plain(result.ct, pp.encoder().encode(std::move(bump)), pp);
            break;
        }
        case TamperKind::StaleLabel: {
            // Type I: the claim references a label nobody authenticated
            result = eval_authenticated(program, authenticated, kg.keys, pp);
            claimed.labels[0] = "stale:" + claimed.labels[0];
            break;
        }
        case TamperKind::CiphertextSwap: {
            result = eval_authenticated(program, authenticated, kg.keys, pp);
            result.ct = authenticated.front().ct;
            break;
        }
        case TamperKind::ConstantOutput: {
            result = eval_authenticated(program, authenticated, kg.keys, pp);
            auto& p = kg.party(kg.rosters.at(inputs.front().group).front());
            std::vector<u64> constant(pp.encoder().slot_count(),
                                      adversary.below(pp.plain_modulus()));
            result.ct = encrypt(kg.keys.at(inputs.front().group),
                                pp.encoder().encode(std::move(constant)), pp, p.sampler);
            break;
        }
    }
    out.transcript.append(450, 0, "eval.result", result.serialize());
    out.eval_ms = ms_since(t0);

    // distributed decryption of the claimed result
    t0 = clock::now();
    std::vector<u64> decrypted_coeffs = run_distributed_decrypt(cfg, kg, result.ct, out.transcript);
    out.decrypt_ms = ms_since(t0);

    t0 = clock::now();
    DecryptFn already = [&decrypted_coeffs](const MultigroupCiphertext&) { return decrypted_coeffs; };
    out.verdict = verify(claimed, result, sg.set, prf, already, pp);
    out.verify_ms = ms_since(t0);

    // plaintext oracle over the honest inputs
    std::vector<u64> values;
    for (const auto& in : inputs) values.push_back(in.value);
    out.expected = program.circuit.eval_zp(values, pp.plain_modulus());
    out.oracle_match = out.verdict.accepted() && out.verdict.value() == out.expected;

    // advisory noise telemetry: distance of the result from the lattice
    // point it decrypts to, via the never-broadcast ideal keys
    auto ideal = kg.ideal_keys();
    RingElement mu = result.ct.comps[0];
    for (size_t i = 0; i < result.ct.roster.size(); ++i) {
        mu = ring_add(mu, ring_mul(result.ct.comps[i + 1], ideal.at(result.ct.roster[i])));
    }
    auto decoded = decrypt_from_phase(mu, pp);
    out.noise = infinity_norm(ring_sub(mu, plain_times_delta(decoded, pp)));
    out.noise_budget = pp.delta() / 2;
    return out;
}

}  // namespace vmghe::protocol

#endif  // VMGHE_PROTOCOL_HPP

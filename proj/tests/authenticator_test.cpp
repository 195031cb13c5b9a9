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

#include <gtest/gtest.h>

#include "scheme_fixtures.hpp"
#include "vmghe/authenticator.hpp"

namespace vmghe {
namespace {

using testing::SchemeFixture;

struct AuthFixture {
    ParamsPtr pp;
    SchemeFixture scheme;
    Prf prf;
    ChallengeSet set;
    SessionRegistry registry;
    Sampler sampler;

    static AuthFixture create(const std::string& preset, SchemeMode mode,
                              const std::vector<size_t>& group_sizes, u64 seed) {
        auto pp = setup(preset, mode, seed);
        auto fx = SchemeFixture::create(pp, group_sizes, seed);
        Sampler set_sampler(pp->sampler_params(), derive_seed(seed, "setgen"));
        std::vector<std::vector<u8>> shares;
        for (size_t i = 0; i < 3; ++i) shares.push_back(setgen_local(pp->lambda(), set_sampler));
        ChallengeSet set = setgen_combine(shares, pp->lambda());
        return AuthFixture{pp,
                           std::move(fx),
                           Prf::from_seed(seed, "prf"),
                           std::move(set),
                           {},
                           Sampler(pp->sampler_params(), derive_seed(seed, "auth"))};
    }

    DecryptFn ideal() {
        return [this](const MultigroupCiphertext& ct) { return scheme.decrypt(ct); };
    }

    Authenticator make_auth(u64 m, const std::string& label, u32 group) {
        return auth(m, label, scheme.keys.at(group), set, prf, *pp, sampler, registry);
    }
};

TEST(Compose, IdentityCompositionGivesSameProgram) {
    LabeledProgram p = parse_program("x * y + 3");
    LabeledProgram composed = compose(Circuit::identity(), {p});
    EXPECT_EQ(composed.circuit.structure_digest(), p.circuit.structure_digest());
    EXPECT_EQ(composed.labels, p.labels);
}

TEST(Compose, SharedLabelsMergeIntoOneWire) {
    LabeledProgram p1 = parse_program("x + y");
    LabeledProgram p2 = parse_program("x * z");
    Circuit g;
    u32 a = g.add_input();
    u32 b = g.add_input();
    g.add_gate(GateKind::Add, a, b);
    LabeledProgram composed = compose(g, {p1, p2});
    EXPECT_EQ(composed.labels, (std::vector<std::string>{"x", "y", "z"}));
    // (x+y) + (x*z) at x=2, y=3, z=4 -> 5 + 8 = 13
    EXPECT_EQ(composed.circuit.eval_zp(std::vector<u64>{2, 3, 4}, 97), 13u);
}

TEST(Compose, ProgramEqualsCompositionOfIdentities) {
    LabeledProgram f = parse_program("a * b + a");
    LabeledProgram composed = compose(f.circuit, {identity_program("a"), identity_program("b")});
    EXPECT_EQ(composed.labels.size(), 2u);
    EXPECT_EQ(composed.labels, f.labels);
    for (u64 x = 0; x < 5; ++x) {
        for (u64 y = 0; y < 5; ++y) {
            std::vector<u64> in{x, y};
            EXPECT_EQ(composed.circuit.eval_zp(in, 97), f.circuit.eval_zp(in, 97));
        }
    }
}

TEST(Compose, ArityMismatchRejected) {
    EXPECT_THROW(compose(Circuit::identity(), {}), std::invalid_argument);
}

TEST(HashTree, IdentityReturnsLeafTag) {
    Digest leaf = sha256("leaf");
    EXPECT_EQ(Circuit::identity().hash_tree(std::vector<Digest>{leaf}), leaf);
}

TEST(HashTree, GateHashesTypeTagAndChildren) {
    LabeledProgram f = parse_program("x + y");
    Digest l1 = sha256("one"), l2 = sha256("two");
    EXPECT_EQ(f.circuit.hash_tree(std::vector<Digest>{l1, l2}), crhf::gate_add(l1, l2));
    LabeledProgram m = parse_program("x * y");
    EXPECT_EQ(m.circuit.hash_tree(std::vector<Digest>{l1, l2}), crhf::gate_mul(l1, l2));
}

TEST(HashTree, LeafPermutationChangesTag) {
    LabeledProgram f = parse_program("x + x * y");  // not symmetric in (x, y)
    Digest l1 = sha256("one"), l2 = sha256("two");
    EXPECT_NE(f.circuit.hash_tree(std::vector<Digest>{l1, l2}),
              f.circuit.hash_tree(std::vector<Digest>{l2, l1}));
}

TEST(SetGen, SingleShareSelectsHalf) {
    std::vector<u8> share{1, 0, 1, 0};
    ChallengeSet s = setgen_combine({share}, 4);
    EXPECT_EQ(s.indices.size(), 2u);
    for (u32 i : s.indices) EXPECT_LT(i, 4u);
}

TEST(SetGen, XorOfSharesDrivesSelection) {
    std::vector<u8> a{1, 0, 1, 0}, b{0, 1, 1, 0}, combined{1, 1, 0, 0};
    ChallengeSet s1 = setgen_combine({a, b}, 4);
    ChallengeSet s2 = setgen_combine({combined}, 4);
    EXPECT_EQ(s1.indices, s2.indices);
}

TEST(SetGen, CardinalityExactlyHalfForAnyMask) {
    for (u32 weight_pattern = 0; weight_pattern < 16; ++weight_pattern) {
        std::vector<u8> share(8, 0);
        for (u32 i = 0; i < 8; ++i) share[i] = (weight_pattern >> (i % 4)) & 1;
        ChallengeSet s = setgen_combine({share}, 8);
        EXPECT_EQ(s.indices.size(), 4u);
    }
}

TEST(SetGen, LengthMismatchRejected) {
    EXPECT_THROW(setgen_combine({std::vector<u8>{1, 0}}, 4), std::invalid_argument);
    EXPECT_THROW(setgen_combine({}, 4), std::invalid_argument);
}

TEST(Auth, ReplicationLayout) {
    PresetSpec spec = PresetSpec::test_s();
    spec.lambda = 4;
    auto pp = setup(spec, SchemeMode::Crs, 50);
    Prf prf = Prf::from_seed(50, "prf");
    ChallengeSet set;
    set.lambda = 4;
    set.indices = {1, 3};
    auto slots = replication_encode(std::vector<u64>{5}, "tau", set, prf, *pp);
    EXPECT_EQ(slots[0], 5u);
    EXPECT_EQ(slots[1], prf.challenge("tau", 1, pp->plain_modulus()));
    EXPECT_EQ(slots[2], 5u);
    EXPECT_EQ(slots[3], prf.challenge("tau", 3, pp->plain_modulus()));
    for (size_t j = 4; j < slots.size(); ++j) EXPECT_EQ(slots[j], 5u);
}

TEST(Auth, EmptySetDegeneratesToAllReplicas) {
    auto pp = setup("TEST-S", SchemeMode::Crs, 51);
    Prf prf = Prf::from_seed(51, "prf");
    ChallengeSet empty;
    empty.lambda = pp->lambda();
    auto slots = replication_encode(std::vector<u64>{9}, "tau", empty, prf, *pp);
    for (u64 v : slots) EXPECT_EQ(v, 9u);
}

TEST(Auth, VectorBlocksShareChallenges) {
    auto pp = setup("TEST-S", SchemeMode::Crs, 52);  // N = 16, lambda = 8: two blocks fit
    Prf prf = Prf::from_seed(52, "prf");
    ChallengeSet set;
    set.lambda = 8;
    set.indices = {0, 2, 5, 7};
    auto slots = replication_encode(std::vector<u64>{3, 4}, "tau", set, prf, *pp);
    for (u32 j = 0; j < 8; ++j) {
        u64 expect_a = set.contains(j) ? prf.challenge("tau", j, pp->plain_modulus()) : 3u;
        u64 expect_b = set.contains(j) ? prf.challenge("tau", j, pp->plain_modulus()) : 4u;
        EXPECT_EQ(slots[j], expect_a);
        EXPECT_EQ(slots[8 + j], expect_b);
    }
    // three blocks exceed the 16 slots
    EXPECT_THROW(replication_encode(std::vector<u64>{1, 2, 3}, "tau", set, prf, *pp),
                 std::invalid_argument);
}

TEST(Auth, RegistryRejectsConflictingLabelReuse) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 53);
    auto a1 = fx.make_auth(5, "x", 1);
    EXPECT_NO_THROW(fx.make_auth(5, "x", 1));                       // same message: fine
    EXPECT_THROW(fx.make_auth(6, "x", 1), std::invalid_argument);   // different message: abort
}

TEST(Verify, IdentityRoundtripAccepts) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {2}, 54);
    for (u64 m : {0ull, 1ull, 42ull, 96ull}) {
        std::string label = "m" + std::to_string(m);
        auto g = fx.make_auth(m, label, 1);
        auto res = verify(identity_program(label), g, fx.set, fx.prf, fx.ideal(), *fx.pp);
        ASSERT_TRUE(res.accepted()) << to_string(res.status);
        EXPECT_EQ(res.value(), m);
    }
}

TEST(Verify, AdditionPipelineAccepts) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {3}, 55);
    LabeledProgram f = parse_program("x + y");
    auto gx = fx.make_auth(40, "x", 1);
    auto gy = fx.make_auth(70, "y", 1);
    auto out = eval_authenticated(f, std::vector<Authenticator>{gx, gy}, fx.scheme.keys, *fx.pp);
    auto res = verify(f, out, fx.set, fx.prf, fx.ideal(), *fx.pp);
    ASSERT_TRUE(res.accepted()) << to_string(res.status);
    EXPECT_EQ(res.value(), (40 + 70) % fx.pp->plain_modulus());
}

TEST(Verify, ProductAcrossGroupsAccepts) {
    auto fx = AuthFixture::create("TEST-M", SchemeMode::Crs, {1, 1}, 56);
    LabeledProgram f = parse_program("x * y");
    auto gx = fx.make_auth(123, "x", 1);
    auto gy = fx.make_auth(456, "y", 2);
    auto out = eval_authenticated(f, std::vector<Authenticator>{gx, gy}, fx.scheme.keys, *fx.pp);
    auto res = verify(f, out, fx.set, fx.prf, fx.ideal(), *fx.pp);
    ASSERT_TRUE(res.accepted()) << to_string(res.status);
    EXPECT_EQ(res.value(), (123 * 456) % fx.pp->plain_modulus());
}

TEST(Verify, IdentityEvalKeepsTag) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 57);
    auto g = fx.make_auth(7, "x", 1);
    auto out = eval_authenticated(identity_program("x"), std::vector<Authenticator>{g},
                                  fx.scheme.keys, *fx.pp);
    EXPECT_EQ(out.tag, g.tag);
}

TEST(Verify, TagDependsOnlyOnShapeAndLabels) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 58);
    LabeledProgram f = parse_program("x + y");
    auto a1 = fx.make_auth(1, "x", 1);
    auto a2 = fx.make_auth(2, "y", 1);
    auto out1 = eval_authenticated(f, std::vector<Authenticator>{a1, a2}, fx.scheme.keys, *fx.pp);

    AuthFixture other = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 58);
    auto b1 = other.make_auth(90, "x", 1);
    auto b2 = other.make_auth(13, "y", 1);
    auto out2 = eval_authenticated(f, std::vector<Authenticator>{b1, b2}, other.scheme.keys, *other.pp);
    EXPECT_EQ(out1.tag, out2.tag);  // same PRF key, same labels, same circuit: same tag
    EXPECT_NE(out1.ct.serialize(), out2.ct.serialize());
}

TEST(Verify, WrongCircuitRejectsWithTagMismatch) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {2}, 59);
    LabeledProgram requested = parse_program("x + y");
    LabeledProgram actually_run = parse_program("x + y + 1");
    auto gx = fx.make_auth(10, "x", 1);
    auto gy = fx.make_auth(20, "y", 1);
    auto out = eval_authenticated(actually_run, std::vector<Authenticator>{gx, gy}, fx.scheme.keys,
                                  *fx.pp);
    auto res = verify(requested, out, fx.set, fx.prf, fx.ideal(), *fx.pp);
    EXPECT_EQ(res.status, VerifyStatus::TagMismatch);
}

TEST(Verify, StaleLabelRejectsWithTagMismatch) {
    // Type I forgery: the claimed program references a label that was never
    // authenticated; the forged tag cannot match f^H over F(ghost).
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 60);
    auto g = fx.make_auth(5, "x", 1);
    auto out = eval_authenticated(identity_program("x"), std::vector<Authenticator>{g},
                                  fx.scheme.keys, *fx.pp);
    auto res = verify(identity_program("ghost"), out, fx.set, fx.prf, fx.ideal(), *fx.pp);
    EXPECT_EQ(res.status, VerifyStatus::TagMismatch);
    EXPECT_FALSE(fx.registry.known("ghost"));
}

// Adds delta to every slot outside the guessed challenge set.
MultigroupCiphertext slot_substitute(const MultigroupCiphertext& ct, const std::vector<u32>& guess,
                                     u64 delta, const PublicParams& pp) {
    std::vector<u64> slots(pp.encoder().slot_count(), 0);
    for (u32 j = 0; j < pp.lambda(); ++j) {
        bool guessed = false;
        for (u32 gidx : guess) guessed |= (gidx == j);
        if (!guessed) slots[j] = delta;
    }
    return add_plain(ct, pp.encoder().encode(std::move(slots)), pp);
}

TEST(Verify, SlotSubstituteEscapesOnlyOnExactGuess) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {2}, 61);
    LabeledProgram f = parse_program("x + y");
    auto gx = fx.make_auth(11, "x", 1);
    auto gy = fx.make_auth(22, "y", 1);
    auto honest = eval_authenticated(f, std::vector<Authenticator>{gx, gy}, fx.scheme.keys, *fx.pp);

    // correct guess: the forged result passes and shifts the value
    Authenticator lucky = honest;
    lucky.ct = slot_substitute(honest.ct, fx.set.indices, 7, *fx.pp);
    auto res_lucky = verify(f, lucky, fx.set, fx.prf, fx.ideal(), *fx.pp);
    ASSERT_TRUE(res_lucky.accepted());
    EXPECT_EQ(res_lucky.value(), (11 + 22 + 7) % fx.pp->plain_modulus());

    // any wrong guess trips the challenge check
    std::vector<u32> wrong = fx.set.indices;
    wrong[0] = (wrong[0] + 1) % fx.pp->lambda();
    while (fx.set.contains(wrong[0])) wrong[0] = (wrong[0] + 1) % fx.pp->lambda();
    Authenticator unlucky = honest;
    unlucky.ct = slot_substitute(honest.ct, wrong, 7, *fx.pp);
    auto res_unlucky = verify(f, unlucky, fx.set, fx.prf, fx.ideal(), *fx.pp);
    EXPECT_EQ(res_unlucky.status, VerifyStatus::ChallengeMismatch);
}

TEST(Verify, SingleSlotTamperAlwaysRejected) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 62);
    auto g = fx.make_auth(33, "x", 1);
    LabeledProgram f = identity_program("x");
    for (u32 j = 0; j < fx.pp->lambda(); ++j) {
        std::vector<u64> slots(fx.pp->encoder().slot_count(), 0);
        slots[j] = 13;
        Authenticator tampered = g;
        tampered.ct = add_plain(g.ct, fx.pp->encoder().encode(std::move(slots)), *fx.pp);
        auto res = verify(f, tampered, fx.set, fx.prf, fx.ideal(), *fx.pp);
        EXPECT_FALSE(res.accepted()) << "slot " << j;
        EXPECT_TRUE(res.status == VerifyStatus::ChallengeMismatch ||
                    res.status == VerifyStatus::ReplicaMismatch);
    }
}

TEST(Verify, CiphertextSwapRejected) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {2}, 63);
    LabeledProgram f = parse_program("x + y");
    auto gx = fx.make_auth(5, "x", 1);
    auto gy = fx.make_auth(6, "y", 1);
    auto honest = eval_authenticated(f, std::vector<Authenticator>{gx, gy}, fx.scheme.keys, *fx.pp);
    Authenticator swapped = honest;
    swapped.ct = gx.ct;  // server returns an input instead of the result
    auto res = verify(f, swapped, fx.set, fx.prf, fx.ideal(), *fx.pp);
    EXPECT_FALSE(res.accepted());
}

TEST(Verify, ConstantOutputForgeryRejected) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {2}, 64);
    LabeledProgram f = parse_program("x + y");
    auto gx = fx.make_auth(5, "x", 1);
    auto gy = fx.make_auth(6, "y", 1);
    auto honest = eval_authenticated(f, std::vector<Authenticator>{gx, gy}, fx.scheme.keys, *fx.pp);
    // the server encrypts its own constant under the public jek
    Sampler forger(fx.pp->sampler_params(), 999);
    std::vector<u64> all_sevens(fx.pp->encoder().slot_count(), 7);
    Authenticator forged = honest;
    forged.ct = encrypt(fx.scheme.keys.at(1), fx.pp->encoder().encode(std::move(all_sevens)), *fx.pp,
                        forger);
    auto res = verify(f, forged, fx.set, fx.prf, fx.ideal(), *fx.pp);
    EXPECT_EQ(res.status, VerifyStatus::ChallengeMismatch);
}

TEST(Verify, DecryptionFailureSurfaces) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 65);
    auto g = fx.make_auth(5, "x", 1);
    DecryptFn broken = [](const MultigroupCiphertext&) -> std::vector<u64> {
        throw std::runtime_error("share combination failed");
    };
    auto res = verify(identity_program("x"), g, fx.set, fx.prf, broken, *fx.pp);
    EXPECT_EQ(res.status, VerifyStatus::DecryptionFailure);
}

TEST(Verify, DepthBudgetEnforced) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 66);
    LabeledProgram deep = parse_program("a * b * c * d * e * f * g * h + a");  // depth 3
    ASSERT_GT(deep.circuit.mult_depth(), 2u);
    std::vector<Authenticator> ins;
    for (const auto& label : deep.labels) ins.push_back(fx.make_auth(1, label, 1));
    EXPECT_THROW(eval_authenticated(deep, ins, fx.scheme.keys, *fx.pp), std::invalid_argument);
}

TEST(SlotSemantics, HomomorphicOpsActSlotwise) {
    auto pp = setup("TEST-M", SchemeMode::Crs, 67);
    auto fx = SchemeFixture::create(pp, {1}, 67);
    Sampler enc(pp->sampler_params(), 67);
    std::vector<u64> va(pp->encoder().slot_count()), vb(pp->encoder().slot_count());
    for (size_t i = 0; i < va.size(); ++i) {
        va[i] = enc.rng().below(pp->plain_modulus());
        vb[i] = enc.rng().below(pp->plain_modulus());
    }
    auto ca = fx.encrypt_for(1, pp->encoder().encode(va), enc);
    auto cb = fx.encrypt_for(1, pp->encoder().encode(vb), enc);
    auto sum_slots = pp->encoder().decode(fx.decrypt(eval_add(ca, cb)));
    auto prod_slots = pp->encoder().decode(fx.decrypt(eval_mul(ca, cb, fx.keys, *pp)));
    for (size_t i = 0; i < va.size(); ++i) {
        EXPECT_EQ(sum_slots[i], add_mod(va[i], vb[i], pp->plain_modulus()));
        EXPECT_EQ(prod_slots[i], mul_mod(va[i], vb[i], pp->plain_modulus()));
    }
}

TEST(Parser, PrecedenceAndParens) {
    LabeledProgram f = parse_program("x + y * z");
    EXPECT_EQ(f.circuit.eval_zp(std::vector<u64>{2, 3, 4}, 97), 14u);
    LabeledProgram g = parse_program("(x + y) * z");
    EXPECT_EQ(g.circuit.eval_zp(std::vector<u64>{2, 3, 4}, 97), 20u);
    LabeledProgram h = parse_program("2 * x + 5");
    EXPECT_EQ(h.circuit.eval_zp(std::vector<u64>{10}, 97), 25u);
}

TEST(Parser, VariableReuseMergesWires) {
    LabeledProgram f = parse_program("x * x + x");
    EXPECT_EQ(f.labels.size(), 1u);
    EXPECT_EQ(f.circuit.eval_zp(std::vector<u64>{3}, 97), 12u);
}

TEST(Parser, RejectsGarbage) {
    EXPECT_THROW(parse_program("x +"), std::invalid_argument);
    EXPECT_THROW(parse_program("x - y"), std::invalid_argument);
    EXPECT_THROW(parse_program("(x"), std::invalid_argument);
    EXPECT_THROW(parse_program("42"), std::invalid_argument);  // no inputs
    EXPECT_THROW(parse_program(""), std::invalid_argument);
}

TEST(Circuit, SerializeRoundtrip) {
    LabeledProgram f = parse_program("a * (b + 7) + c");
    Bytes blob = f.circuit.serialize();
    ByteReader r(blob);
    Circuit back = Circuit::deserialize(r);
    EXPECT_EQ(back.structure_digest(), f.circuit.structure_digest());
    EXPECT_EQ(back.serialize(), blob);
}

TEST(Authenticator, SerializeIsCiphertextThenTag) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 68);
    auto g = fx.make_auth(5, "x", 1);
    Bytes blob = g.serialize();
    ByteReader r(blob);
    Authenticator back = Authenticator::deserialize(r, fx.pp->ctx_q());
    EXPECT_EQ(back.tag, g.tag);
    EXPECT_EQ(back.ct.serialize(), g.ct.serialize());
    // tag is the trailing 32 bytes
    ASSERT_GE(blob.size(), 32u);
    EXPECT_TRUE(std::equal(blob.end() - 32, blob.end(), g.tag.begin()));
}

TEST(Labels, LengthLimits) {
    auto fx = AuthFixture::create("TEST-S", SchemeMode::Crs, {1}, 69);
    std::string long_label(257, 'a');
    EXPECT_THROW(fx.make_auth(1, long_label, 1), std::invalid_argument);
    EXPECT_THROW(fx.make_auth(1, "", 1), std::invalid_argument);
    std::string max_label(256, 'b');
    EXPECT_NO_THROW(fx.make_auth(1, max_label, 1));
}

}  // namespace
}  // namespace vmghe

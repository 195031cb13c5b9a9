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

#include "oracles.hpp"
#include "scheme_fixtures.hpp"

namespace vmghe {
namespace {

using testing::SchemeFixture;

ParamsPtr pp_s(SchemeMode mode = SchemeMode::Crs, u64 seed = 1) {
    return setup("TEST-S", mode, seed);
}

ParamsPtr pp_m(SchemeMode mode = SchemeMode::Crs, u64 seed = 1) {
    return setup("TEST-M", mode, seed);
}

std::vector<u64> random_plain(const PublicParams& pp, Rng& rng) {
    std::vector<u64> m(pp.ctx_q()->degree());
    for (auto& v : m) v = rng.below(pp.plain_modulus());
    return m;
}

std::vector<u64> constant_plain(const PublicParams& pp, u64 value) {
    std::vector<u64> m(pp.ctx_q()->degree(), 0);
    m[0] = value % pp.plain_modulus();
    return m;
}

TEST(Setup, PresetEcho) {
    auto pp = pp_s();
    BigInt q = 1;
    for (u64 p : pp->spec().q_primes) q *= p;
    EXPECT_EQ(pp->ctx_q()->modulus(), q);
    EXPECT_EQ(pp->spec().q_primes.size(), 3u);
    EXPECT_EQ(pp->spec().aux_primes.size(), 2u);
    EXPECT_EQ(pp->base_digits(), 3u);
    EXPECT_EQ(pp->extended_digits(), 5u);
    EXPECT_EQ(pp->delta(), pp->ctx_q()->modulus() / pp->plain_modulus());
}

TEST(Setup, CrsDeterministicUnderSeed) {
    auto a = pp_s(SchemeMode::Crs, 42);
    auto b = pp_s(SchemeMode::Crs, 42);
    auto c = pp_s(SchemeMode::Crs, 43);
    for (size_t m = 0; m < a->extended_digits(); ++m) {
        // structurally equal contexts, compare raw residues
        EXPECT_EQ(a->crs()[m].serialize(), b->crs()[m].serialize());
    }
    EXPECT_NE(a->crs()[0].serialize(), c->crs()[0].serialize());
}

TEST(Setup, CrsFreeHasNoCommonVector) {
    auto pp = pp_s(SchemeMode::CrsFree);
    EXPECT_FALSE(pp->has_crs());
    EXPECT_THROW(pp->crs(), std::logic_error);
}

TEST(Setup, ParamsBlobRoundtrip) {
    auto pp = pp_m(SchemeMode::Crs, 77);
    Bytes blob = pp->serialize();
    ByteReader r(blob);
    PublicParams back = PublicParams::deserialize(r);
    EXPECT_EQ(back.spec().name, "TEST-M");
    EXPECT_EQ(back.crs_seed(), 77u);
    EXPECT_EQ(back.ctx_q()->modulus(), pp->ctx_q()->modulus());
    // identical derived common vector
    for (size_t m = 0; m < pp->extended_digits(); ++m) {
        EXPECT_EQ(back.crs()[m].serialize(), pp->crs()[m].serialize());
    }
}

TEST(Setup, RejectsBadRecipes) {
    PresetSpec s = PresetSpec::test_s();
    s.plain_modulus = s.q_primes[0];  // p | q
    EXPECT_THROW(PublicParams(s, SchemeMode::Crs), std::invalid_argument);

    s = PresetSpec::test_s();
    s.aux_primes[0] = s.q_primes[0];  // gcd(q, q') != 1
    EXPECT_THROW(PublicParams(s, SchemeMode::Crs), std::invalid_argument);

    s = PresetSpec::test_s();
    s.plain_modulus = 101;  // prime but not 1 mod 2N
    EXPECT_THROW(PublicParams(s, SchemeMode::Crs), std::invalid_argument);

    s = PresetSpec::test_s();
    s.lambda = 3;  // not a power of two
    EXPECT_THROW(PublicParams(s, SchemeMode::Crs), std::invalid_argument);

    s = PresetSpec::test_s();
    s.lambda = 64;  // exceeds N = 16 slots
    EXPECT_THROW(PublicParams(s, SchemeMode::Crs), std::invalid_argument);
}

TEST(Setup, ConfigFileRoundtrip) {
    std::istringstream cfg(
        "# toy recipe\n"
        "name = MINI\n"
        "degree = 16\n"
        "q_primes = 97 193 257\n"
        "aux_primes = 449 577\n"
        "plain_modulus = 353\n"
        "lambda = 8\n"
        "sigma = 3.2\n"
        "sigma_smudge = 204.8\n");
    PresetSpec s = PresetSpec::from_config(cfg);
    EXPECT_EQ(s.name, "MINI");
    EXPECT_EQ(s.degree, 16u);
    ASSERT_EQ(s.q_primes.size(), 3u);
    EXPECT_EQ(s.q_partition.size(), 4u);  // defaulted per-prime
    auto pp = setup(s, SchemeMode::Crs, 5);
    EXPECT_EQ(pp->plain_modulus(), 353u);
}

TEST(Keygen, NoiselessShareIsExactlyLinear) {
    PresetSpec s = PresetSpec::test_s();
    s.sampler.sigma = 0.0;  // test-only degeneration
    auto pp = setup(s, SchemeMode::Crs, 9);
    Sampler sampler(pp->sampler_params(), 31337);
    PartyKeys pk = keygen_party(*pp, 1, 1, {1}, sampler);
    for (size_t m = 0; m < pp->extended_digits(); ++m) {
        EXPECT_EQ(pk.share.b[m], ring_neg(ring_mul(pk.sk.s, pp->crs()[m])));
    }
}

TEST(Keygen, ShareBoundsHoldFor100Shares) {
    // singleton groups: the share's v0 is also the group aggregate
    auto pp = pp_s();
    BigInt bound = static_cast<long long>(std::ceil(6.0 * pp->sampler_params().sigma));
    Sampler sampler(pp->sampler_params(), 555);
    for (int i = 0; i < 100; ++i) {
        PartyKeys pk = keygen_party(*pp, 1, 1, {1}, sampler);
        for (size_t m = 0; m < pp->extended_digits(); ++m) {
            BigInt resid = infinity_norm(ring_add(pk.share.b[m], ring_mul(pk.sk.s, pp->crs()[m])));
            EXPECT_LE(resid, bound);
        }
        for (size_t m = 0; m < pp->base_digits(); ++m) {
            RingElement r1 = ring_add(pk.share.v1[m],
                                      ring_add(ring_mul(pk.sk.s, pk.share.v0[m]),
                                               ring_mul(*pk.share.r_debug, pp->gadget_q().element(m))));
            EXPECT_LE(infinity_norm(r1), bound);
        }
        for (size_t m = 0; m < pp->extended_digits(); ++m) {
            RingElement r2 = ring_sub(ring_add(pk.share.v2[m], ring_mul(*pk.share.r_debug, pp->crs()[m])),
                                      ring_mul(pk.sk.s, pp->gstar_scaled(m)));
            EXPECT_LE(infinity_norm(r2), bound);
        }
    }
}

TEST(Keygen, CrsFreePartiesDrawDistinctVectors) {
    auto pp = pp_s(SchemeMode::CrsFree);
    Sampler s1(pp->sampler_params(), 1), s2(pp->sampler_params(), 2);
    SecretKey k1 = keygen_secret(*pp, s1), k2 = keygen_secret(*pp, s2);
    auto i1 = keygen_party_initial(*pp, k1, s1);
    auto i2 = keygen_party_initial(*pp, k2, s2);
    EXPECT_NE(i1.a_own[0], i2.a_own[0]);
}

TEST(Keygen, SingletonGroupEqualsShare) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 7);
    const auto& jk = fx.keys.at(1);
    const auto& share = fx.groups[0].shares[0];
    for (size_t m = 0; m < pp->extended_digits(); ++m) EXPECT_EQ(jk.beta[m], share.b[m]);
    for (size_t m = 0; m < pp->base_digits(); ++m) {
        EXPECT_EQ(jk.nu0[m], share.v0[m]);
        EXPECT_EQ(jk.nu1[m], share.v1[m]);
    }
}

TEST(Keygen, TwoPartyAggregationIsComponentSum) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {2}, 8);
    const auto& jk = fx.keys.at(1);
    const auto& g = fx.groups[0];
    for (size_t m = 0; m < pp->extended_digits(); ++m) {
        EXPECT_EQ(jk.beta[m], ring_add(g.shares[0].b[m], g.shares[1].b[m]));
    }
}

TEST(Keygen, NearLinearityBoundsOn50RandomGroups) {
    auto pp = pp_s();
    Rng rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        size_t size = 1 + rng.below(3);
        auto fx = SchemeFixture::create(pp, {size}, 90000 + trial);
        const auto& g = fx.groups[0];
        BigInt bound = BigInt(static_cast<long long>(std::ceil(6.0 * pp->sampler_params().sigma))) *
                       static_cast<long long>(size);
        auto rep = check_near_linearity(fx.keys.at(1), g.jsk, g.r_sum, pp->crs(), *pp);
        EXPECT_TRUE(rep.within(bound)) << "size " << size << ": " << rep.beta_residual << " "
                                       << rep.nu1_residual << " " << rep.nu2_residual;
    }
}

TEST(Keygen, AggregateRejectsEmptyAndMixed) {
    auto pp = pp_s();
    EXPECT_THROW(aggregate_group(1, {}, {}, *pp), std::invalid_argument);
    auto fx = SchemeFixture::create(pp, {1}, 3);
    auto share = fx.groups[0].shares[0];
    share.a_own.push_back(RingElement(pp->ctx_q()));  // smells like CRS-free material
    EXPECT_THROW(aggregate_group(1, {1}, {share}, *pp), std::invalid_argument);
}

TEST(Encrypt, NoiselessDegenerationIsDeltaM) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 11);
    auto m = constant_plain(*pp, 42);
    EncryptionRandomness zero_rnd{RingElement(pp->ctx_q()), RingElement(pp->ctx_q()),
                                  RingElement(pp->ctx_q())};
    auto ct = encrypt_with(fx.keys.at(1).jek_b0, fx.keys.at(1).jek_a0, 1, m, *pp, zero_rnd);
    EXPECT_EQ(ct.comps[0], plain_times_delta(m, *pp));
    EXPECT_TRUE(ct.comps[1].is_zero());
    EXPECT_EQ(fx.decrypt(ct), m);
}

TEST(Encrypt, RoundtripIdealDecrypt100) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {2}, 12);
    Sampler enc(pp->sampler_params(), 900);
    for (int i = 0; i < 100; ++i) {
        auto m = random_plain(*pp, enc.rng());
        auto ct = fx.encrypt_for(1, m, enc);
        EXPECT_EQ(fx.decrypt(ct), m);
    }
}

TEST(Encrypt, Probabilistic) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 13);
    Sampler enc(pp->sampler_params(), 901);
    auto m = constant_plain(*pp, 5);
    auto c1 = fx.encrypt_for(1, m, enc);
    auto c2 = fx.encrypt_for(1, m, enc);
    EXPECT_NE(c1.serialize(), c2.serialize());
    EXPECT_EQ(fx.decrypt(c1), fx.decrypt(c2));
}

TEST(Expand, SingleGroupIdentity) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 14);
    Sampler enc(pp->sampler_params(), 902);
    auto ct = fx.encrypt_for(1, constant_plain(*pp, 9), enc);
    auto ex = expand(ct, 1, {1});
    EXPECT_EQ(ex.comps.size(), 2u);
    EXPECT_EQ(ex.comps[0], ct.comps[0]);
    EXPECT_EQ(ex.comps[1], ct.comps[1]);
}

TEST(Expand, PlacesComponentAtPosition) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1, 1, 1}, 15);
    Sampler enc(pp->sampler_params(), 903);
    auto ct = fx.encrypt_for(2, constant_plain(*pp, 3), enc);
    auto ex = expand(ct, 2, {1, 2, 3});
    ASSERT_EQ(ex.comps.size(), 4u);
    EXPECT_EQ(ex.comps[0], ct.comps[0]);
    EXPECT_TRUE(ex.comps[1].is_zero());
    EXPECT_EQ(ex.comps[2], ct.comps[1]);
    EXPECT_TRUE(ex.comps[3].is_zero());
    EXPECT_EQ(fx.decrypt(ex), fx.decrypt(ct));
    EXPECT_THROW(expand(ct, 4, {1, 2, 3}), std::invalid_argument);
}

TEST(EvalAdd, ZeroIsNeutral) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {2}, 16);
    Sampler enc(pp->sampler_params(), 904);
    auto m = random_plain(*pp, enc.rng());
    auto ct = fx.encrypt_for(1, m, enc);
    auto zero = fx.encrypt_for(1, constant_plain(*pp, 0), enc);
    EXPECT_EQ(fx.decrypt(eval_add(ct, zero)), m);
}

TEST(EvalAdd, DecryptsToSum) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1, 2}, 17);
    Sampler enc(pp->sampler_params(), 905);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    auto m1 = random_plain(*pp, enc.rng());
    auto m2 = random_plain(*pp, enc.rng());
    auto ct = eval_add(fx.encrypt_for(1, m1, enc), fx.encrypt_for(1, m2, enc));
    EXPECT_EQ(fx.decrypt(ct), plain.add(m1, m2));
}

TEST(EvalAdd, DisjointRostersAlignToUnion) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1, 1}, 18);
    Sampler enc(pp->sampler_params(), 906);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    auto m1 = random_plain(*pp, enc.rng());
    auto m2 = random_plain(*pp, enc.rng());
    auto ct = eval_add(fx.encrypt_for(1, m1, enc), fx.encrypt_for(2, m2, enc));
    EXPECT_EQ(ct.roster, (std::vector<u32>{1, 2}));
    EXPECT_EQ(fx.decrypt(ct), plain.add(m1, m2));
}

TEST(EvalMul, AbsorbingZero) {
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {1}, 19);
    Sampler enc(pp->sampler_params(), 907);
    auto m = random_plain(*pp, enc.rng());
    auto ct = fx.encrypt_for(1, m, enc);
    auto zero = fx.encrypt_for(1, constant_plain(*pp, 0), enc);
    auto prod = eval_mul(zero, ct, fx.keys, *pp);
    EXPECT_EQ(fx.decrypt(prod), constant_plain(*pp, 0));
}

TEST(EvalMul, ScalarProduct) {
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {1}, 20);
    Sampler enc(pp->sampler_params(), 908);
    auto prod = eval_mul(fx.encrypt_for(1, constant_plain(*pp, 2), enc),
                         fx.encrypt_for(1, constant_plain(*pp, 3), enc), fx.keys, *pp);
    EXPECT_EQ(fx.decrypt(prod), constant_plain(*pp, 6));
}

TEST(EvalMul, TwoGroupsTwoPartiesRandomMessages) {
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {2, 2}, 21);
    Sampler enc(pp->sampler_params(), 909);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    for (int trial = 0; trial < 5; ++trial) {
        auto m1 = random_plain(*pp, enc.rng());
        auto m2 = random_plain(*pp, enc.rng());
        auto prod = eval_mul(fx.encrypt_for(1, m1, enc), fx.encrypt_for(2, m2, enc), fx.keys, *pp);
        EXPECT_EQ(prod.roster, (std::vector<u32>{1, 2}));
        auto expect = plain.mul(m1, m2);
        EXPECT_EQ(fx.decrypt(prod), expect);
        // depth-1 noise stays below Delta/2
        BigInt noise = measure_noise(prod, fx.ideal_keys, expect, *pp);
        EXPECT_LT(2 * noise, pp->delta());
    }
}

TEST(EvalMul, MissingKeyFailsLoud) {
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {1, 1}, 22);
    Sampler enc(pp->sampler_params(), 910);
    auto c1 = fx.encrypt_for(1, constant_plain(*pp, 2), enc);
    auto c2 = fx.encrypt_for(2, constant_plain(*pp, 3), enc);
    KeyStore partial;
    partial.emplace(1, fx.keys.at(1));
    EXPECT_THROW(eval_mul(c1, c2, partial, *pp), std::invalid_argument);
}

TEST(EvalMulCrsFree, ScalarProduct) {
    auto pp = pp_m(SchemeMode::CrsFree);
    auto fx = SchemeFixture::create(pp, {1}, 23);
    Sampler enc(pp->sampler_params(), 911);
    auto prod = eval_mul(fx.encrypt_for(1, constant_plain(*pp, 2), enc),
                         fx.encrypt_for(1, constant_plain(*pp, 3), enc), fx.keys, *pp);
    EXPECT_EQ(fx.decrypt(prod), constant_plain(*pp, 6));
}

TEST(EvalMulCrsFree, AbsorbingZero) {
    auto pp = pp_m(SchemeMode::CrsFree);
    auto fx = SchemeFixture::create(pp, {2}, 24);
    Sampler enc(pp->sampler_params(), 912);
    auto m = random_plain(*pp, enc.rng());
    auto prod = eval_mul(fx.encrypt_for(1, constant_plain(*pp, 0), enc), fx.encrypt_for(1, m, enc),
                         fx.keys, *pp);
    EXPECT_EQ(fx.decrypt(prod), constant_plain(*pp, 0));
}

TEST(EvalMulCrsFree, TwoGroupsRandomMessages) {
    auto pp = pp_m(SchemeMode::CrsFree);
    auto fx = SchemeFixture::create(pp, {2, 2}, 25);
    Sampler enc(pp->sampler_params(), 913);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    for (int trial = 0; trial < 3; ++trial) {
        auto m1 = random_plain(*pp, enc.rng());
        auto m2 = random_plain(*pp, enc.rng());
        auto prod = eval_mul(fx.encrypt_for(1, m1, enc), fx.encrypt_for(2, m2, enc), fx.keys, *pp);
        EXPECT_EQ(fx.decrypt(prod), plain.mul(m1, m2));
    }
}

TEST(EvalMulCrsFree, MissingCrossKeyFailsLoud) {
    auto pp = pp_m(SchemeMode::CrsFree);
    auto fx = SchemeFixture::create(pp, {1, 1}, 26);
    Sampler enc(pp->sampler_params(), 914);
    auto c1 = fx.encrypt_for(1, constant_plain(*pp, 2), enc);
    auto c2 = fx.encrypt_for(2, constant_plain(*pp, 3), enc);
    KeyStore broken = fx.keys;
    broken.at(1).cross.clear();
    EXPECT_THROW(eval_mul(c1, c2, broken, *pp), std::invalid_argument);
}

TEST(DistributedDecrypt, SinglePartyNoSmudgeEqualsIdeal) {
    PresetSpec s = PresetSpec::test_s();
    s.sampler.sigma_smudge = 0.0;  // test-only degeneration
    auto pp = setup(s, SchemeMode::Crs, 27);
    auto fx = SchemeFixture::create(pp, {1}, 27);
    Sampler enc(pp->sampler_params(), 915);
    Sampler dec(pp->sampler_params(), 916);
    auto m = random_plain(*pp, enc.rng());
    auto ct = fx.encrypt_for(1, m, enc);
    auto share = partial_decrypt(ct, fx.groups[0].secrets[0], 1, 1, *pp, dec);
    auto got = combine_shares(ct, {share}, fx.rosters, *pp);
    EXPECT_EQ(got, fx.decrypt(ct));
    EXPECT_EQ(got, m);
}

TEST(DistributedDecrypt, TwoGroupsThreePartiesMatchesIdeal) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {3, 3}, 28);
    Sampler enc(pp->sampler_params(), 917);
    Sampler dec(pp->sampler_params(), 918);
    for (int trial = 0; trial < 20; ++trial) {
        auto m1 = random_plain(*pp, enc.rng());
        auto m2 = random_plain(*pp, enc.rng());
        auto ct = eval_add(fx.encrypt_for(1, m1, enc), fx.encrypt_for(2, m2, enc));
        std::vector<DecryptionShare> shares;
        for (const auto& g : fx.groups) {
            for (size_t i = 0; i < g.party_ids.size(); ++i) {
                shares.push_back(partial_decrypt(ct, g.secrets[i], g.id, g.party_ids[i], *pp, dec));
            }
        }
        EXPECT_EQ(combine_shares(ct, shares, fx.rosters, *pp), fx.decrypt(ct));
    }
}

TEST(DistributedDecrypt, MissingShareIsErrorNotWrongAnswer) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {2}, 29);
    Sampler enc(pp->sampler_params(), 919);
    Sampler dec(pp->sampler_params(), 920);
    auto ct = fx.encrypt_for(1, constant_plain(*pp, 7), enc);
    auto s1 = partial_decrypt(ct, fx.groups[0].secrets[0], 1, 1, *pp, dec);
    auto s2 = partial_decrypt(ct, fx.groups[0].secrets[1], 1, 2, *pp, dec);
    EXPECT_THROW(combine_shares(ct, {s1}, fx.rosters, *pp), std::invalid_argument);
    EXPECT_THROW(combine_shares(ct, {s1, s1}, fx.rosters, *pp), std::invalid_argument);
    // digest mismatch: share computed for a different ciphertext
    auto other = fx.encrypt_for(1, constant_plain(*pp, 8), enc);
    auto s3 = partial_decrypt(other, fx.groups[0].secrets[1], 1, 2, *pp, dec);
    EXPECT_THROW(combine_shares(ct, {s1, s3}, fx.rosters, *pp), std::invalid_argument);
    EXPECT_EQ(combine_shares(ct, {s1, s2}, fx.rosters, *pp), constant_plain(*pp, 7));
}

TEST(IdealDecrypt, AllZeroCiphertextIsZero) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 30);
    MultigroupCiphertext zero;
    zero.roster = {1};
    zero.comps.assign(2, RingElement(pp->ctx_q()));
    EXPECT_EQ(fx.decrypt(zero), constant_plain(*pp, 0));
}

TEST(IdealDecrypt, RosterKeyMismatchRejected) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 31);
    Sampler enc(pp->sampler_params(), 921);
    auto ct = fx.encrypt_for(1, constant_plain(*pp, 1), enc);
    ct.roster = {9};
    EXPECT_THROW(fx.decrypt(ct), std::invalid_argument);
}

TEST(Specialization, SingleGroupKeepsTwoComponents) {
    // one group, several parties: the multiparty shape
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {3}, 32);
    Sampler enc(pp->sampler_params(), 922);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    auto m1 = random_plain(*pp, enc.rng());
    auto m2 = random_plain(*pp, enc.rng());
    auto prod = eval_mul(fx.encrypt_for(1, m1, enc), fx.encrypt_for(1, m2, enc), fx.keys, *pp);
    EXPECT_EQ(prod.comps.size(), 2u);
    EXPECT_EQ(fx.decrypt(prod), plain.mul(m1, m2));
}

TEST(Specialization, SingletonGroupsGrowOneSlotPerParty) {
    // three singleton groups: the multikey shape
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {1, 1, 1}, 33);
    Sampler enc(pp->sampler_params(), 923);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    auto m1 = random_plain(*pp, enc.rng());
    auto m2 = random_plain(*pp, enc.rng());
    auto m3 = random_plain(*pp, enc.rng());
    auto sum = eval_add(eval_add(fx.encrypt_for(1, m1, enc), fx.encrypt_for(2, m2, enc)),
                        fx.encrypt_for(3, m3, enc));
    EXPECT_EQ(sum.comps.size(), 4u);
    EXPECT_EQ(fx.decrypt(sum), plain.add(plain.add(m1, m2), m3));
}

TEST(RosterMonotonicity, EvalNeverShrinksRoster) {
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {1, 1}, 34);
    Sampler enc(pp->sampler_params(), 924);
    auto c1 = fx.encrypt_for(1, constant_plain(*pp, 2), enc);
    auto c2 = fx.encrypt_for(2, constant_plain(*pp, 3), enc);
    auto sum = eval_add(c1, c2);
    auto prod = eval_mul(sum, c1, fx.keys, *pp);
    EXPECT_EQ(prod.roster.size(), 2u);
    auto again = eval_add(prod, c1);
    EXPECT_EQ(again.roster.size(), 2u);
}

TEST(PlainOps, AddAndMulPlain) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {1}, 35);
    Sampler enc(pp->sampler_params(), 925);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    auto m = random_plain(*pp, enc.rng());
    auto k = random_plain(*pp, enc.rng());
    auto ct = fx.encrypt_for(1, m, enc);
    EXPECT_EQ(fx.decrypt(add_plain(ct, k, *pp)), plain.add(m, k));
    EXPECT_EQ(fx.decrypt(mul_plain(ct, k, *pp)), plain.mul(m, k));
}

TEST(Serialization, KeyAndCiphertextRoundtrip) {
    auto pp = pp_s();
    auto fx = SchemeFixture::create(pp, {2}, 36);
    Sampler enc(pp->sampler_params(), 926);
    auto ct = fx.encrypt_for(1, constant_plain(*pp, 33), enc);

    Bytes ct_blob = ct.serialize();
    ByteReader r1(ct_blob);
    auto ct2 = MultigroupCiphertext::deserialize(r1, pp->ctx_q());
    EXPECT_EQ(ct2.serialize(), ct_blob);

    Bytes jk_blob = fx.keys.at(1).serialize();
    ByteReader r2(jk_blob);
    auto jk2 = JointKeys::deserialize(r2, pp->ctx_q());
    EXPECT_EQ(jk2.serialize(), jk_blob);
    EXPECT_FALSE(jk2.ideal_jsk.has_value());  // test handle never travels

    Bytes share_blob = fx.groups[0].shares[0].serialize();
    ByteReader r3(share_blob);
    auto share2 = PublicKeyShare::deserialize(r3, pp->ctx_q());
    EXPECT_EQ(share2.serialize(), share_blob);
    EXPECT_FALSE(share2.r_debug.has_value());

    SecretKey sk = fx.groups[0].secrets[0];
    Bytes sk_blob = sk.serialize();
    ByteReader r4(sk_blob);
    EXPECT_EQ(SecretKey::deserialize(r4, pp->ctx_q()).s, sk.s);
}

TEST(Noise, FreshAndDepthOneBudget) {
    auto pp = pp_m();
    auto fx = SchemeFixture::create(pp, {2, 2}, 37);
    Sampler enc(pp->sampler_params(), 927);
    oracle::PlainRing plain{pp->plain_modulus(), pp->ctx_q()->degree()};
    auto m1 = random_plain(*pp, enc.rng());
    auto m2 = random_plain(*pp, enc.rng());
    auto c1 = fx.encrypt_for(1, m1, enc);
    BigInt fresh = measure_noise(c1, fx.ideal_keys, m1, *pp);
    auto prod = eval_mul(c1, fx.encrypt_for(2, m2, enc), fx.keys, *pp);
    BigInt after = measure_noise(prod, fx.ideal_keys, plain.mul(m1, m2), *pp);
    EXPECT_LT(fresh, after);
    EXPECT_LT(2 * after, pp->delta());
}

}  // namespace
}  // namespace vmghe

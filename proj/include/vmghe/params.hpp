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

#ifndef VMGHE_PARAMS_HPP
#define VMGHE_PARAMS_HPP

#include <bit>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "vmghe/encoding.hpp"
#include "vmghe/gadget.hpp"
#include "vmghe/hash.hpp"
#include "vmghe/sampler.hpp"

namespace vmghe {

enum class SchemeMode : u8 { Crs = 0, CrsFree = 1 };

inline std::string to_string(SchemeMode m) { return m == SchemeMode::Crs ? "crs" : "crs_free"; }

inline SchemeMode mode_from_string(const std::string& s) {
    if (s == "crs") return SchemeMode::Crs;
    if (s == "crs_free") return SchemeMode::CrsFree;
    throw std::invalid_argument("unknown scheme mode: " + s);
}

// Raw parameter recipe: ring degree, ciphertext primes with their digit
// partition, the auxiliary primes q' used by the product, the plaintext
// modulus, replication width, and sampler widths.
//
// The bundled presets are toy parameters for testing and demos; they are far
// below any meaningful RLWE security level and documented as such.
struct PresetSpec {
    std::string name;
    u64 degree = 0;
    std::vector<u64> q_primes;
    std::vector<size_t> q_partition;
    std::vector<u64> aux_primes;
    std::vector<size_t> aux_partition;
    u64 plain_modulus = 0;
    u32 lambda = 8;
    SamplerParams sampler;

    // TEST-S: N = 16, three 17-bit primes; exact-arithmetic scale. Additions
    // and fresh encryptions decrypt fine; the product's relinearization noise
    // does not fit this tiny modulus, so product tests run on TEST-M.
    static PresetSpec test_s() {
        PresetSpec s;
        s.name = "TEST-S";
        s.degree = 16;
        s.plain_modulus = 97;
        auto primes = find_ntt_primes(17, 2 * s.degree, 5, {s.plain_modulus});
        s.q_primes = {primes[0], primes[1], primes[2]};
        s.aux_primes = {primes[3], primes[4]};
        s.q_partition = {0, 1, 2, 3};
        s.aux_partition = {0, 1, 2};
        s.lambda = 8;
        return s;
    }

    // TEST-M: N = 256, five 30-bit primes; supports two levels of products.
    static PresetSpec test_m() {
        PresetSpec s;
        s.name = "TEST-M";
        s.degree = 256;
        s.plain_modulus = 65537;
        auto primes = find_ntt_primes(30, 2 * s.degree, 8, {s.plain_modulus});
        s.q_primes = {primes[0], primes[1], primes[2], primes[3], primes[4]};
        s.aux_primes = {primes[5], primes[6], primes[7]};
        s.q_partition = {0, 1, 2, 3, 4, 5};
        s.aux_partition = {0, 1, 2, 3};
        s.lambda = 8;
        return s;
    }

    static PresetSpec by_name(const std::string& name) {
        if (name == "TEST-S") return test_s();
        if (name == "TEST-M") return test_m();
        throw std::invalid_argument("unknown preset: " + name);
    }

    // Plain-text config: `key = value` lines, '#' comments, lists separated
    // by spaces. Unset partitions default to one prime per digit.
    static PresetSpec from_config(std::istream& in) {
        PresetSpec s;
        s.name = "CUSTOM";
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string v) {
                size_t b = v.find_first_not_of(" \t\r");
                size_t e = v.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
            };
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            std::istringstream vs(value);
            if (key == "name") {
                s.name = value;
            } else if (key == "degree") {
                vs >> s.degree;
            } else if (key == "q_primes") {
                u64 p;
                while (vs >> p) s.q_primes.push_back(p);
            } else if (key == "q_partition") {
                size_t b;
                while (vs >> b) s.q_partition.push_back(b);
            } else if (key == "aux_primes") {
                u64 p;
                while (vs >> p) s.aux_primes.push_back(p);
            } else if (key == "aux_partition") {
                size_t b;
                while (vs >> b) s.aux_partition.push_back(b);
            } else if (key == "plain_modulus") {
                vs >> s.plain_modulus;
            } else if (key == "lambda") {
                vs >> s.lambda;
            } else if (key == "sigma") {
                vs >> s.sampler.sigma;
            } else if (key == "sigma_smudge") {
                vs >> s.sampler.sigma_smudge;
            } else if (!key.empty()) {
                throw std::invalid_argument("preset config: unknown key '" + key + "'");
            }
        }
        if (s.q_partition.empty()) {
            for (size_t i = 0; i <= s.q_primes.size(); ++i) s.q_partition.push_back(i);
        }
        if (s.aux_partition.empty()) {
            for (size_t i = 0; i <= s.aux_primes.size(); ++i) s.aux_partition.push_back(i);
        }
        return s;
    }

    static PresetSpec from_config_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("preset config: cannot open " + path);
        return from_config(in);
    }
};

// Everything public and common to all parties: residue systems for q, q' and
// q* = q*q', the plaintext slot view, both gadget vectors, the scaled gadget
// round((p/q') g*) used in key generation, and (in CRS mode) the common
// uniform vector derived from a recorded seed.
class PublicParams {
public:
    PublicParams(const PresetSpec& spec, SchemeMode mode, u64 crs_seed = 0)
        : spec_(spec), mode_(mode), crs_seed_(crs_seed) {
        spec_.sampler.validate();
        if (!is_power_of_two(spec_.lambda)) throw std::invalid_argument("setup: lambda must be a power of two");
        if (spec_.lambda > spec_.degree) throw std::invalid_argument("setup: lambda exceeds slot capacity");
        if (!is_prime_u64(spec_.plain_modulus)) throw std::invalid_argument("setup: plaintext modulus must be prime");
        if ((spec_.plain_modulus - 1) % (2 * spec_.degree) != 0) {
            throw std::invalid_argument("setup: plaintext modulus must be 1 mod 2N");
        }
        for (u64 p : spec_.q_primes) {
            if (p == spec_.plain_modulus) throw std::invalid_argument("setup: plaintext modulus divides q");
        }
        for (u64 p : spec_.aux_primes) {
            for (u64 qj : spec_.q_primes) {
                if (p == qj) throw std::invalid_argument("setup: q and q' share a prime");
            }
        }

        ctx_q_ = make_context(spec_.degree, spec_.q_primes, spec_.q_partition);
        ctx_aux_ = make_context(spec_.degree, spec_.aux_primes, spec_.aux_partition);
        std::vector<u64> star_primes = spec_.q_primes;
        star_primes.insert(star_primes.end(), spec_.aux_primes.begin(), spec_.aux_primes.end());
        std::vector<size_t> star_partition = spec_.q_partition;
        for (size_t i = 1; i < spec_.aux_partition.size(); ++i) {
            star_partition.push_back(spec_.q_primes.size() + spec_.aux_partition[i]);
        }
        ctx_star_ = make_context(spec_.degree, star_primes, star_partition);
        if (!ctx_star_->ntt_ready()) {
            throw std::invalid_argument("setup: scheme moduli must all be 1 mod 2N");
        }

        encoder_ = std::make_unique<SlotEncoder>(spec_.plain_modulus, spec_.degree);
        gadget_q_ = std::make_unique<GadgetVector>(GadgetVector::digit(ctx_q_));
        gadget_star_ = std::make_unique<GadgetVector>(GadgetVector::digit(ctx_star_));

        delta_ = ctx_q_->modulus() / spec_.plain_modulus;

        // round((p/q') g*_m) mod q, one constant per extended digit
        gstar_scaled_.reserve(gadget_star_->size());
        const BigInt& aux_mod = ctx_aux_->modulus();
        for (size_t m = 0; m < gadget_star_->size(); ++m) {
            BigInt centered = mod_centered(gadget_star_->value(m), ctx_star_->modulus());
            gstar_scaled_.push_back(
                from_constant(round_div(centered * spec_.plain_modulus, aux_mod), ctx_q_));
        }

        if (mode_ == SchemeMode::Crs) {
            Sampler crs_sampler(spec_.sampler, derive_seed(crs_seed_, "crs"));
            crs_.reserve(extended_digits());
            for (size_t m = 0; m < extended_digits(); ++m) crs_.push_back(crs_sampler.sample_uniform(ctx_q_));
        }
    }

    const PresetSpec& spec() const { return spec_; }
    SchemeMode mode() const { return mode_; }
    u64 crs_seed() const { return crs_seed_; }
    const ContextPtr& ctx_q() const { return ctx_q_; }
    const ContextPtr& ctx_aux() const { return ctx_aux_; }
    const ContextPtr& ctx_star() const { return ctx_star_; }
    u64 plain_modulus() const { return spec_.plain_modulus; }
    u32 lambda() const { return spec_.lambda; }
    const SamplerParams& sampler_params() const { return spec_.sampler; }
    const SlotEncoder& encoder() const { return *encoder_; }
    const GadgetVector& gadget_q() const { return *gadget_q_; }
    const GadgetVector& gadget_star() const { return *gadget_star_; }
    const BigInt& delta() const { return delta_; }
    size_t base_digits() const { return ctx_q_->digit_count(); }       // k
    size_t extended_digits() const { return ctx_star_->digit_count(); }  // k*

    // round((p/q') g*_m), as a constant of R_q.
    const RingElement& gstar_scaled(size_t m) const { return gstar_scaled_[m]; }

    // CRS vector a in R_q^{k*}; absent in CRS-free mode.
    const std::vector<RingElement>& crs() const {
        if (mode_ != SchemeMode::Crs) throw std::logic_error("no common reference vector in crs_free mode");
        return crs_;
    }
    bool has_crs() const { return mode_ == SchemeMode::Crs; }

    // Parameter blob: recipe plus mode and CRS seed, so that every party
    // derives an identical common vector.
    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::PublicParams);
        w.str(spec_.name);
        w.u64_(spec_.degree);
        w.u32_(static_cast<u32>(spec_.q_primes.size()));
        for (u64 p : spec_.q_primes) w.u64_(p);
        w.u32_(static_cast<u32>(spec_.q_partition.size()));
        for (size_t b : spec_.q_partition) w.u64_(b);
        w.u32_(static_cast<u32>(spec_.aux_primes.size()));
        for (u64 p : spec_.aux_primes) w.u64_(p);
        w.u32_(static_cast<u32>(spec_.aux_partition.size()));
        for (size_t b : spec_.aux_partition) w.u64_(b);
        w.u64_(spec_.plain_modulus);
        w.u32_(spec_.lambda);
        w.u64_(std::bit_cast<u64>(spec_.sampler.sigma));
        w.u64_(std::bit_cast<u64>(spec_.sampler.sigma_smudge));
        w.u8_(static_cast<u8>(mode_));
        w.u64_(crs_seed_);
        return w.take();
    }

    static PublicParams deserialize(ByteReader& r) {
        r.expect_header(RecordTag::PublicParams);
        PresetSpec s;
        s.name = r.str();
        s.degree = r.u64_();
        s.q_primes.resize(r.u32_());
        for (auto& p : s.q_primes) p = r.u64_();
        s.q_partition.resize(r.u32_());
        for (auto& b : s.q_partition) b = static_cast<size_t>(r.u64_());
        s.aux_primes.resize(r.u32_());
        for (auto& p : s.aux_primes) p = r.u64_();
        s.aux_partition.resize(r.u32_());
        for (auto& b : s.aux_partition) b = static_cast<size_t>(r.u64_());
        s.plain_modulus = r.u64_();
        s.lambda = r.u32_();
        s.sampler.sigma = std::bit_cast<double>(r.u64_());
        s.sampler.sigma_smudge = std::bit_cast<double>(r.u64_());
        SchemeMode mode = static_cast<SchemeMode>(r.u8_());
        u64 seed = r.u64_();
        return PublicParams(s, mode, seed);
    }

private:
    PresetSpec spec_;
    SchemeMode mode_;
    u64 crs_seed_;
    ContextPtr ctx_q_;
    ContextPtr ctx_aux_;
    ContextPtr ctx_star_;
    std::unique_ptr<SlotEncoder> encoder_;
    std::unique_ptr<GadgetVector> gadget_q_;
    std::unique_ptr<GadgetVector> gadget_star_;
    BigInt delta_;
    std::vector<RingElement> gstar_scaled_;
    std::vector<RingElement> crs_;
};

using ParamsPtr = std::shared_ptr<const PublicParams>;

inline ParamsPtr setup(const PresetSpec& spec, SchemeMode mode, u64 crs_seed = 0) {
    return std::make_shared<const PublicParams>(spec, mode, crs_seed);
}

inline ParamsPtr setup(const std::string& preset_name, SchemeMode mode, u64 crs_seed = 0) {
    return setup(PresetSpec::by_name(preset_name), mode, crs_seed);
}

}  // namespace vmghe

#endif  // VMGHE_PARAMS_HPP

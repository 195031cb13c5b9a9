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

#ifndef VMGHE_SAMPLER_HPP
#define VMGHE_SAMPLER_HPP

#include <cmath>
#include <vector>

#include "vmghe/ring.hpp"

namespace vmghe {

// Self-contained xoshiro256** so that sampling is reproducible across
// toolchains; std::random distributions are not portable.
class Rng {
public:
    explicit Rng(u64 seed) {
        // splitmix64 expansion of the seed into the xoshiro state
        u64 x = seed;
        for (auto& s : state_) {
            x += 0x9e3779b97f4a7c15ull;
            u64 z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            s = z ^ (z >> 31);
        }
    }

    u64 next() {
        auto rotl = [](u64 v, int k) { return (v << k) | (v >> (64 - k)); };
        u64 result = rotl(state_[1] * 5, 7) * 9;
        u64 t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, bound) without modulo bias.
    u64 below(u64 bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
        u64 threshold = (0 - bound) % bound;
        for (;;) {
            u64 v = next();
            if (v >= threshold) return v % bound;
        }
    }

    double uniform_unit() {
        // 53 random bits into [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    u64 state_[4];
};

// Distribution parameters: ternary key distribution, Gaussian error width,
// and the wider smudging width used by distributed decryption.
struct SamplerParams {
    double sigma = 3.2;
    double sigma_smudge = 204.8;
    // P(-1), P(0), P(+1) for the ternary key distribution
    double ternary_neg = 1.0 / 3.0;
    double ternary_zero = 1.0 / 3.0;

    void validate() const {
        if (sigma < 0 || sigma_smudge < 0) throw std::invalid_argument("SamplerParams: negative width");
        if (ternary_neg < 0 || ternary_zero < 0 || ternary_neg + ternary_zero > 1.0) {
            throw std::invalid_argument("SamplerParams: bad ternary probabilities");
        }
    }
};

// Stateful, single-owner sampler. Parallel users take independent seeded
// instances.
class Sampler {
public:
    Sampler(SamplerParams params, u64 seed) : params_(params), rng_(seed) { params_.validate(); }

    Rng& rng() { return rng_; }

    // Ternary secret with coefficients in {-1, 0, +1}.
    RingElement sample_ternary(const ContextPtr& ctx) {
        RingElement e(ctx, Domain::Coeff);
        std::vector<i64> coeffs(ctx->degree());
        for (auto& c : coeffs) {
            double u = rng_.uniform_unit();
            c = u < params_.ternary_neg ? -1 : (u < params_.ternary_neg + params_.ternary_zero ? 0 : 1);
        }
        store_signed(e, coeffs);
        return e;
    }

    // Rounded Gaussian of standard deviation sigma.
    RingElement sample_gaussian(const ContextPtr& ctx, double sigma) {
        RingElement e(ctx, Domain::Coeff);
        std::vector<i64> coeffs(ctx->degree());
        for (auto& c : coeffs) c = std::llround(next_gaussian() * sigma);
        store_signed(e, coeffs);
        return e;
    }

    RingElement sample_error(const ContextPtr& ctx) { return sample_gaussian(ctx, params_.sigma); }
    RingElement sample_smudge(const ContextPtr& ctx) {
        return sample_gaussian(ctx, params_.sigma_smudge);
    }

    // Uniform over R_q: independent uniform residues per prime are uniform
    // modulo q by CRT.
    RingElement sample_uniform(const ContextPtr& ctx) {
        RingElement e(ctx, Domain::Coeff);
        for (size_t j = 0; j < ctx->prime_count(); ++j) {
            u64 q = ctx->prime(j);
            for (size_t c = 0; c < ctx->degree(); ++c) e.set(j, c, rng_.below(q));
        }
        return e;
    }

    std::vector<u8> random_bits(size_t count) {
        std::vector<u8> bits(count);
        for (auto& b : bits) b = static_cast<u8>(rng_.next() & 1);
        return bits;
    }

private:
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller on our own uniforms
        double u1, u2;
        do {
            u1 = rng_.uniform_unit();
        } while (u1 <= 1e-300);
        u2 = rng_.uniform_unit();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

    static void store_signed(RingElement& e, const std::vector<i64>& coeffs) {
        const auto& ctx = *e.context();
        for (size_t j = 0; j < ctx.prime_count(); ++j) {
            u64 q = ctx.prime(j);
            for (size_t c = 0; c < ctx.degree(); ++c) {
                i64 v = coeffs[c];
                u64 mag = static_cast<u64>(v >= 0 ? v : -v) % q;
                e.set(j, c, v >= 0 ? mag : (mag == 0 ? 0 : q - mag));
            }
        }
    }

    SamplerParams params_;
    Rng rng_;
    double spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace vmghe

#endif  // VMGHE_SAMPLER_HPP

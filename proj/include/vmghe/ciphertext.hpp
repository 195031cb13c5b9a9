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

#ifndef VMGHE_CIPHERTEXT_HPP
#define VMGHE_CIPHERTEXT_HPP

#include <algorithm>

#include "vmghe/hash.hpp"
#include "vmghe/ring.hpp"

namespace vmghe {

// Ciphertext over an ordered group roster (I_1, ..., I_n): components
// (c_0, ..., c_n) with c_0 the constant slot and c_i decryptable by the
// ideal key of roster group i.
struct MultigroupCiphertext {
    std::vector<RingElement> comps;
    std::vector<u32> roster;

    size_t group_count() const { return roster.size(); }

    void check_shape() const {
        if (comps.size() != roster.size() + 1) {
            throw std::logic_error("ciphertext: component count must be roster length + 1");
        }
        for (size_t i = 0; i < roster.size(); ++i) {
            for (size_t j = i + 1; j < roster.size(); ++j) {
                if (roster[i] == roster[j]) throw std::logic_error("ciphertext: duplicate roster group");
            }
        }
    }

    // Slot of a group id (0-based into roster; component index is slot+1).
    std::optional<size_t> slot_of(u32 group_id) const {
        for (size_t i = 0; i < roster.size(); ++i) {
            if (roster[i] == group_id) return i;
        }
        return std::nullopt;
    }

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::Ciphertext);
        w.u32_(static_cast<u32>(roster.size()));
        for (u32 g : roster) w.u32_(g);
        w.u32_(static_cast<u32>(comps.size()));
        for (const auto& c : comps) w.sized_bytes(c.serialize());
        return w.take();
    }

    static MultigroupCiphertext deserialize(ByteReader& r, const ContextPtr& ctx) {
        r.expect_header(RecordTag::Ciphertext);
        MultigroupCiphertext out;
        out.roster.resize(r.u32_());
        for (auto& g : out.roster) g = r.u32_();
        u32 n = r.u32_();
        out.comps.reserve(n);
        for (u32 i = 0; i < n; ++i) {
            Bytes inner = r.sized_bytes();
            ByteReader ir(inner);
            out.comps.push_back(RingElement::deserialize(ir, ctx));
        }
        out.check_shape();
        return out;
    }

    Digest digest() const { return sha256(serialize()); }
};

// Place a 2-component ciphertext into an n-group roster: c_0 stays in the
// constant slot, c_1 moves to `position` (1-based), zeros elsewhere.
inline MultigroupCiphertext expand(const MultigroupCiphertext& ct, size_t position,
                                   const std::vector<u32>& roster) {
    if (ct.comps.size() != 2) throw std::invalid_argument("expand: ciphertext is not single-group");
    if (position < 1 || position > roster.size()) throw std::invalid_argument("expand: position out of range");
    MultigroupCiphertext out;
    out.roster = roster;
    out.comps.assign(roster.size() + 1, RingElement(ct.comps[0].context()));
    out.comps[0] = ct.comps[0];
    out.comps[position] = ct.comps[1];
    out.check_shape();
    return out;
}

// Ordered union: groups of `a` in order, then unseen groups of `b`.
inline std::vector<u32> roster_union(const std::vector<u32>& a, const std::vector<u32>& b) {
    std::vector<u32> out = a;
    for (u32 g : b) {
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
    return out;
}

// Re-index components onto a larger roster (never shrinks).
inline MultigroupCiphertext align_to_roster(const MultigroupCiphertext& ct,
                                            const std::vector<u32>& roster) {
    MultigroupCiphertext out;
    out.roster = roster;
    out.comps.assign(roster.size() + 1, RingElement(ct.comps[0].context()));
    out.comps[0] = ct.comps[0];
    for (size_t i = 0; i < ct.roster.size(); ++i) {
        auto it = std::find(roster.begin(), roster.end(), ct.roster[i]);
        if (it == roster.end()) throw std::invalid_argument("align: target roster misses a group");
        out.comps[static_cast<size_t>(it - roster.begin()) + 1] = ct.comps[i + 1];
    }
    out.check_shape();
    return out;
}

}  // namespace vmghe

#endif  // VMGHE_CIPHERTEXT_HPP

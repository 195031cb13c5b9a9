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

#ifndef VMGHE_CIRCUIT_HPP
#define VMGHE_CIRCUIT_HPP

#include <map>
#include <string>

#include "vmghe/prf.hpp"

namespace vmghe {

enum class GateKind : u8 { Input = 0, Const = 1, Add = 2, Mul = 3 };

// Arithmetic circuit over Z_p: fan-in-2 add/mul gates, constant wires,
// input wires, one output (the last gate). Gates are stored in topological
// order; `left`/`right` index earlier gates, `value` is the input position
// for Input gates and the literal for Const gates.
struct Gate {
    GateKind kind;
    u32 left = 0;
    u32 right = 0;
    u64 value = 0;
};

class Circuit {
public:
    Circuit() = default;

    static Circuit identity() {
        Circuit c;
        c.gates_.push_back(Gate{GateKind::Input, 0, 0, 0});
        c.input_count_ = 1;
        return c;
    }

    size_t input_count() const { return input_count_; }
    size_t gate_count() const { return gates_.size(); }
    const std::vector<Gate>& gates() const { return gates_; }

    u32 add_input() {
        gates_.push_back(Gate{GateKind::Input, 0, 0, input_count_++});
        return static_cast<u32>(gates_.size() - 1);
    }
    u32 add_const(u64 v) {
        gates_.push_back(Gate{GateKind::Const, 0, 0, v});
        return static_cast<u32>(gates_.size() - 1);
    }
    u32 add_gate(GateKind kind, u32 left, u32 right) {
        if (kind != GateKind::Add && kind != GateKind::Mul) throw std::invalid_argument("bad gate kind");
        if (left >= gates_.size() || right >= gates_.size()) {
            throw std::invalid_argument("gate operands must reference earlier gates");
        }
        gates_.push_back(Gate{kind, left, right, 0});
        return static_cast<u32>(gates_.size() - 1);
    }

    void validate() const {
        if (gates_.empty()) throw std::invalid_argument("circuit: empty");
        u64 inputs_seen = 0;
        for (size_t i = 0; i < gates_.size(); ++i) {
            const Gate& g = gates_[i];
            switch (g.kind) {
                case GateKind::Input:
                    if (g.value != inputs_seen++) throw std::invalid_argument("circuit: input order broken");
                    break;
                case GateKind::Const:
                    break;
                case GateKind::Add:
                case GateKind::Mul:
                    if (g.left >= i || g.right >= i) throw std::invalid_argument("circuit: not topological");
                    break;
            }
        }
        if (inputs_seen != input_count_) throw std::invalid_argument("circuit: input count mismatch");
    }

    // Evaluate over Z_p.
    u64 eval_zp(std::span<const u64> inputs, u64 p) const {
        if (inputs.size() != input_count_) throw std::invalid_argument("eval_zp: wrong input count");
        std::vector<u64> vals(gates_.size());
        for (size_t i = 0; i < gates_.size(); ++i) {
            const Gate& g = gates_[i];
            switch (g.kind) {
                case GateKind::Input: vals[i] = inputs[g.value] % p; break;
                case GateKind::Const: vals[i] = g.value % p; break;
                case GateKind::Add: vals[i] = add_mod(vals[g.left], vals[g.right], p); break;
                case GateKind::Mul: vals[i] = mul_mod(vals[g.left], vals[g.right], p); break;
            }
        }
        return vals.back();
    }

    // Hash tree: input wires carry the given leaf tags, constants hash their
    // literal, gates hash their children with a type prefix. The output-wire
    // value fingerprints (circuit shape, leaf tags) and nothing else.
    Digest hash_tree(std::span<const Digest> leaf_tags) const {
        if (leaf_tags.size() != input_count_) throw std::invalid_argument("hash_tree: tag count mismatch");
        std::vector<Digest> vals(gates_.size());
        for (size_t i = 0; i < gates_.size(); ++i) {
            const Gate& g = gates_[i];
            switch (g.kind) {
                case GateKind::Input: vals[i] = leaf_tags[g.value]; break;
                case GateKind::Const: vals[i] = crhf::constant(g.value); break;
                case GateKind::Add: vals[i] = crhf::gate_add(vals[g.left], vals[g.right]); break;
                case GateKind::Mul: vals[i] = crhf::gate_mul(vals[g.left], vals[g.right]); break;
            }
        }
        return vals.back();
    }

    // Structural fingerprint, invariant under wire renumbering: a recursive
    // digest from the output wire.
    Digest structure_digest() const {
        std::vector<Digest> vals(gates_.size());
        for (size_t i = 0; i < gates_.size(); ++i) {
            const Gate& g = gates_[i];
            ByteWriter w;
            switch (g.kind) {
                case GateKind::Input:
                    w.u8_(0x10);
                    w.u64_(g.value);
                    break;
                case GateKind::Const:
                    w.u8_(0x11);
                    w.u64_(g.value);
                    break;
                case GateKind::Add:
                case GateKind::Mul:
                    w.u8_(g.kind == GateKind::Add ? 0x12 : 0x13);
                    w.bytes(vals[g.left]);
                    w.bytes(vals[g.right]);
                    break;
            }
            vals[i] = sha256(w.data());
        }
        return vals.back();
    }

    size_t mult_depth() const {
        std::vector<size_t> depth(gates_.size(), 0);
        for (size_t i = 0; i < gates_.size(); ++i) {
            const Gate& g = gates_[i];
            if (g.kind == GateKind::Add) {
                depth[i] = std::max(depth[g.left], depth[g.right]);
            } else if (g.kind == GateKind::Mul) {
                depth[i] = std::max(depth[g.left], depth[g.right]) + 1;
            }
        }
        return depth.back();
    }

    size_t mult_count() const {
        size_t n = 0;
        for (const Gate& g : gates_) n += g.kind == GateKind::Mul ? 1 : 0;
        return n;
    }

    Bytes serialize() const {
        ByteWriter w;
        w.header(RecordTag::Circuit);
        w.u64_(input_count_);
        w.u32_(static_cast<u32>(gates_.size()));
        for (const Gate& g : gates_) {
            w.u8_(static_cast<u8>(g.kind));
            w.u32_(g.left);
            w.u32_(g.right);
            w.u64_(g.value);
        }
        return w.take();
    }

    static Circuit deserialize(ByteReader& r) {
        r.expect_header(RecordTag::Circuit);
        Circuit c;
        c.input_count_ = r.u64_();
        u32 n = r.u32_();
        c.gates_.reserve(n);
        for (u32 i = 0; i < n; ++i) {
            Gate g;
            g.kind = static_cast<GateKind>(r.u8_());
            g.left = r.u32_();
            g.right = r.u32_();
            g.value = r.u64_();
            c.gates_.push_back(g);
        }
        c.validate();
        return c;
    }

private:
    std::vector<Gate> gates_;
    u64 input_count_ = 0;
};

// Circuit plus ordered, pairwise-distinct input labels.
struct LabeledProgram {
    Circuit circuit;
    std::vector<std::string> labels;

    void validate() const {
        circuit.validate();
        if (labels.size() != circuit.input_count()) {
            throw std::invalid_argument("labeled program: one label per input wire required");
        }
        for (size_t i = 0; i < labels.size(); ++i) {
            check_label(labels[i]);
            for (size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) throw std::invalid_argument("labeled program: labels must be distinct");
            }
        }
    }

    Digest tag_for(const Prf& prf) const {
        std::vector<Digest> leaves;
        leaves.reserve(labels.size());
        for (const auto& l : labels) leaves.push_back(prf.tag(l));
        return circuit.hash_tree(leaves);
    }
};

inline LabeledProgram identity_program(std::string label) {
    LabeledProgram p{Circuit::identity(), {std::move(label)}};
    p.validate();
    return p;
}

// Composition g(P_1, ..., P_t): splice each component program into the
// matching input of g; input wires with equal labels across components merge
// into a single wire (first-appearance order).
inline LabeledProgram compose(const Circuit& g, const std::vector<LabeledProgram>& programs) {
    if (g.input_count() != programs.size()) throw std::invalid_argument("compose: arity mismatch");
    LabeledProgram out;
    std::map<std::string, u32> wire_of_label;
    std::vector<u32> component_outputs;

    for (const auto& prog : programs) {
        prog.validate();
        std::vector<u32> remap(prog.circuit.gate_count());
        for (size_t i = 0; i < prog.circuit.gate_count(); ++i) {
            const Gate& gate = prog.circuit.gates()[i];
            switch (gate.kind) {
                case GateKind::Input: {
                    const std::string& label = prog.labels[gate.value];
                    auto it = wire_of_label.find(label);
                    if (it == wire_of_label.end()) {
                        u32 widx = out.circuit.add_input();
                        out.labels.push_back(label);
                        it = wire_of_label.emplace(label, widx).first;
                    }
                    remap[i] = it->second;
                    break;
                }
                case GateKind::Const:
                    remap[i] = out.circuit.add_const(gate.value);
                    break;
                case GateKind::Add:
                case GateKind::Mul:
                    remap[i] = out.circuit.add_gate(gate.kind, remap[gate.left], remap[gate.right]);
                    break;
            }
        }
        component_outputs.push_back(remap.back());
    }

    std::vector<u32> remap(g.gate_count());
    for (size_t i = 0; i < g.gate_count(); ++i) {
        const Gate& gate = g.gates()[i];
        switch (gate.kind) {
            case GateKind::Input:
                remap[i] = component_outputs[gate.value];
                break;
            case GateKind::Const:
                remap[i] = out.circuit.add_const(gate.value);
                break;
            case GateKind::Add:
            case GateKind::Mul:
                remap[i] = out.circuit.add_gate(gate.kind, remap[gate.left], remap[gate.right]);
                break;
        }
    }
    // the output wire must be the last gate; alias with x + 0 when the
    // splice ended on an earlier (merged) wire
    if (remap.back() != out.circuit.gate_count() - 1) {
        u32 zero = out.circuit.add_const(0);
        out.circuit.add_gate(GateKind::Add, remap.back(), zero);
    }
    out.validate();
    return out;
}

// Tiny expression language for scenario programs: identifiers, integer
// literals, +, *, parentheses. Variables become input wires in first-use
// order and their names become the labels.
class ExpressionParser {
public:
    static LabeledProgram parse(std::string_view src) {
        ExpressionParser p(src);
        LabeledProgram out;
        u32 root = p.parse_sum(out);
        p.skip_ws();
        if (p.pos_ != p.src_.size()) throw std::invalid_argument("program: trailing characters");
        if (root != out.circuit.gate_count() - 1) {
            u32 zero = out.circuit.add_const(0);
            out.circuit.add_gate(GateKind::Add, root, zero);
        }
        out.validate();
        if (out.labels.empty()) throw std::invalid_argument("program: needs at least one input");
        return out;
    }

private:
    explicit ExpressionParser(std::string_view src) : src_(src) {}

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    u32 parse_sum(LabeledProgram& out) {
        u32 lhs = parse_product(out);
        for (;;) {
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '+') {
                ++pos_;
                u32 rhs = parse_product(out);
                lhs = out.circuit.add_gate(GateKind::Add, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    u32 parse_product(LabeledProgram& out) {
        u32 lhs = parse_atom(out);
        for (;;) {
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '*') {
                ++pos_;
                u32 rhs = parse_atom(out);
                lhs = out.circuit.add_gate(GateKind::Mul, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    u32 parse_atom(LabeledProgram& out) {
        skip_ws();
        if (pos_ >= src_.size()) throw std::invalid_argument("program: unexpected end");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            u32 inner = parse_sum(out);
            skip_ws();
            if (pos_ >= src_.size() || src_[pos_] != ')') throw std::invalid_argument("program: missing ')'");
            ++pos_;
            return inner;
        }
        if (c >= '0' && c <= '9') {
            u64 v = 0;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
                v = v * 10 + static_cast<u64>(src_[pos_] - '0');
                ++pos_;
            }
            return out.circuit.add_const(v);
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   ((src_[pos_] >= 'a' && src_[pos_] <= 'z') || (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
                    (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_')) {
                ++pos_;
            }
            std::string name(src_.substr(start, pos_ - start));
            for (size_t i = 0; i < out.labels.size(); ++i) {
                if (out.labels[i] == name) {
                    // existing input wire: find its gate
                    for (size_t gi = 0; gi < out.circuit.gate_count(); ++gi) {
                        const Gate& g = out.circuit.gates()[gi];
                        if (g.kind == GateKind::Input && g.value == i) return static_cast<u32>(gi);
                    }
                }
            }
            u32 widx = out.circuit.add_input();
            out.labels.push_back(name);
            return widx;
        }
        throw std::invalid_argument(std::string("program: unexpected character '") + c + "'");
    }

    std::string_view src_;
    size_t pos_ = 0;
};

inline LabeledProgram parse_program(std::string_view src) { return ExpressionParser::parse(src); }

}  // namespace vmghe

#endif  // VMGHE_CIRCUIT_HPP

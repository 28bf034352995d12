// Copyright 2026 The qrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrisk/circuit.hpp"
#include "qrisk/random.hpp"

namespace qrisk {

namespace {

// Symplectic bits: X -> (1,0), Z -> (0,1), Y -> (1,1).
int xbit(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
int zbit(Pauli p) { return p == Pauli::Z || p == Pauli::Y; }

Pauli from_bits(int x, int z) {
    if (x && z) return Pauli::Y;
    if (x) return Pauli::X;
    if (z) return Pauli::Z;
    return Pauli::I;
}

void emit(Circuit& out, Pauli p, int q, const std::optional<Condition>& cond) {
    if (p == Pauli::I) return;
    GateKind kind = p == Pauli::X ? GateKind::X : (p == Pauli::Y ? GateKind::Y : GateKind::Z);
    Instruction inst = Instruction::gate(kind, q);
    inst.condition = cond;
    out.append(std::move(inst));
}

}  // namespace

PauliFrame propagate_through_cx(PauliFrame before) {
    const int xc = xbit(before.control), zc = zbit(before.control);
    const int xt = xbit(before.target), zt = zbit(before.target);
    return {from_bits(xc, zc ^ zt), from_bits(xt ^ xc, zt)};
}

Circuit pauli_twirl(const Circuit& c, std::uint64_t seed) {
    Rng rng(seed);
    Circuit out(c.num_qubits(), c.num_clbits());
    for (const Instruction& inst : c) {
        const bool is_cx = inst.kind == GateKind::X && inst.num_controls == 1;
        if (!is_cx) {
            out.append(inst);
            continue;
        }
        const auto r = rng.below(16);
        PauliFrame before{static_cast<Pauli>(r & 3), static_cast<Pauli>(r >> 2)};
        PauliFrame after = propagate_through_cx(before);
        const int ctrl = inst.qubits[0], tgt = inst.qubits[1];
        emit(out, before.control, ctrl, inst.condition);
        emit(out, before.target, tgt, inst.condition);
        out.append(inst);
        emit(out, after.control, ctrl, inst.condition);
        emit(out, after.target, tgt, inst.condition);
    }
    return out;
}

}  // namespace qrisk

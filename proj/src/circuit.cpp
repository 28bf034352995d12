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

#include <algorithm>
#include <cmath>
#include <set>

namespace qrisk {

namespace {

const char* base_name(GateKind kind) {
    switch (kind) {
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::PHASE: return "PHASE";
        case GateKind::MEASURE: return "MEASURE";
        case GateKind::RESET: return "RESET";
        case GateKind::BARRIER: return "BARRIER";
    }
    return "?";
}

}  // namespace

std::string Instruction::name() const {
    std::string base = base_name(kind);
    if (num_controls == 0) return base;
    if (num_controls == 1) return "C" + base;
    return "MC" + base;
}

Instruction Instruction::gate(GateKind kind, int target, double theta) {
    Instruction inst;
    inst.kind = kind;
    inst.qubits = {target};
    inst.theta = theta;
    return inst;
}

Instruction Instruction::controlled_gate(GateKind kind, std::vector<int> controls, int target,
                                         double theta) {
    Instruction inst;
    inst.kind = kind;
    inst.num_controls = static_cast<int>(controls.size());
    inst.qubits = std::move(controls);
    inst.qubits.push_back(target);
    inst.theta = theta;
    return inst;
}

Instruction Instruction::measure(int qubit, int clbit) {
    Instruction inst;
    inst.kind = GateKind::MEASURE;
    inst.qubits = {qubit};
    inst.clbit = clbit;
    return inst;
}

Instruction Instruction::reset(int qubit) {
    Instruction inst;
    inst.kind = GateKind::RESET;
    inst.qubits = {qubit};
    return inst;
}

Instruction Instruction::barrier(std::vector<int> qubits) {
    Instruction inst;
    inst.kind = GateKind::BARRIER;
    inst.qubits = std::move(qubits);
    return inst;
}

Instruction inverse(const Instruction& inst) {
    if (!inst.is_unitary()) {
        if (inst.kind == GateKind::BARRIER) return inst;
        throw CircuitError("cannot invert " + inst.name());
    }
    Instruction out = inst;
    if (inst.has_param()) out.theta = -inst.theta;
    return out;
}

Circuit::Circuit(int num_qubits, int num_clbits) : num_qubits_(num_qubits), num_clbits_(num_clbits) {
    if (num_qubits < 0 || num_clbits < 0) throw CircuitError("negative register size");
}

bool Circuit::is_pure() const {
    return std::none_of(instructions_.begin(), instructions_.end(), [](const Instruction& i) {
        return i.kind == GateKind::MEASURE || i.kind == GateKind::RESET;
    });
}

Circuit& Circuit::append(Instruction inst) {
    if (inst.qubits.empty() && inst.kind != GateKind::BARRIER) {
        throw CircuitError(inst.name() + " has no qubits");
    }
    std::set<int> seen;
    for (int q : inst.qubits) {
        if (q < 0 || q >= num_qubits_) {
            throw CircuitError(inst.name() + ": qubit " + std::to_string(q) + " outside width " +
                               std::to_string(num_qubits_));
        }
        if (!seen.insert(q).second) {
            throw CircuitError(inst.name() + ": repeated qubit " + std::to_string(q));
        }
    }
    if (inst.num_controls < 0 || inst.num_controls >= static_cast<int>(inst.qubits.size() + 1)) {
        throw CircuitError(inst.name() + ": bad control count");
    }
    if (inst.is_unitary() && inst.num_controls + 1 != static_cast<int>(inst.qubits.size())) {
        throw CircuitError(inst.name() + ": expects controls plus one target");
    }
    if (!std::isfinite(inst.theta)) throw CircuitError(inst.name() + ": non-finite angle");
    if (inst.kind == GateKind::MEASURE) {
        if (inst.clbit < 0) throw CircuitError("MEASURE without classical bit");
        num_clbits_ = std::max(num_clbits_, inst.clbit + 1);
    }
    if (inst.condition) {
        if (!inst.is_unitary()) {
            throw CircuitError("conditions are only allowed on unitary gates");
        }
        if (inst.condition->clbit < 0 || (inst.condition->value != 0 && inst.condition->value != 1)) {
            throw CircuitError("malformed condition");
        }
        num_clbits_ = std::max(num_clbits_, inst.condition->clbit + 1);
    }
    instructions_.push_back(std::move(inst));
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.num_qubits() != num_qubits_) {
        throw CircuitError("width mismatch: " + std::to_string(num_qubits_) + " vs " +
                           std::to_string(other.num_qubits()));
    }
    num_clbits_ = std::max(num_clbits_, other.num_clbits());
    instructions_.insert(instructions_.end(), other.instructions_.begin(), other.instructions_.end());
    return *this;
}

Circuit compose(const Circuit& a, const Circuit& b) {
    Circuit out = a;
    out.append(b);
    return out;
}

Circuit power(const Circuit& c, int k) {
    if (!c.is_pure()) throw CircuitError("power requires a pure circuit");
    if (k < 1) throw CircuitError("power requires k >= 1");
    Circuit out(c.num_qubits(), c.num_clbits());
    for (int i = 0; i < k; ++i) out.append(c);
    return out;
}

Circuit inverse(const Circuit& c) {
    if (!c.is_pure()) throw CircuitError("inverse requires a pure circuit");
    Circuit out(c.num_qubits(), c.num_clbits());
    for (auto it = c.instructions().rbegin(); it != c.instructions().rend(); ++it) {
        out.append(inverse(*it));
    }
    return out;
}

Circuit remap(const Circuit& c, std::span<const int> qubit_map, int width) {
    if (static_cast<int>(qubit_map.size()) != c.num_qubits()) {
        throw CircuitError("qubit map size does not match circuit width");
    }
    Circuit out(width, c.num_clbits());
    for (Instruction inst : c) {
        for (int& q : inst.qubits) q = qubit_map[q];
        out.append(std::move(inst));
    }
    return out;
}

Circuit widen(const Circuit& c, int width) {
    if (width < c.num_qubits()) throw CircuitError("widen cannot shrink a circuit");
    std::vector<int> map(c.num_qubits());
    for (int i = 0; i < c.num_qubits(); ++i) map[i] = i;
    return remap(c, map, width);
}

Circuit controlled_on(const Circuit& c, int control, std::span<const int> qubit_map, int width) {
    if (!c.is_pure()) throw CircuitError("controlled requires a pure circuit");
    Circuit out(width, c.num_clbits());
    for (const Instruction& src : c) {
        Instruction inst = src;
        for (int& q : inst.qubits) q = qubit_map[q];
        if (inst.is_unitary()) {
            inst.qubits.insert(inst.qubits.begin(), control);
            ++inst.num_controls;
        }
        out.append(std::move(inst));
    }
    return out;
}

Circuit controlled(const Circuit& c) {
    std::vector<int> map(c.num_qubits());
    for (int i = 0; i < c.num_qubits(); ++i) map[i] = i;
    return controlled_on(c, c.num_qubits(), map, c.num_qubits() + 1);
}

Circuit conditioned(const Circuit& c, int clbit, int value) {
    if (!c.is_pure()) throw CircuitError("conditioned requires a pure circuit");
    if (value != 0 && value != 1) throw CircuitError("condition value must be 0 or 1");
    Circuit out(c.num_qubits(), std::max(c.num_clbits(), clbit + 1));
    for (Instruction inst : c) {
        if (inst.kind == GateKind::BARRIER) {
            out.append(std::move(inst));
            continue;
        }
        if (inst.condition) throw CircuitError("instruction is already conditioned");
        inst.condition = Condition{clbit, value};
        out.append(std::move(inst));
    }
    return out;
}

CircuitMetrics metrics(const Circuit& c) {
    CircuitMetrics m;
    m.width = c.num_qubits();
    std::vector<std::size_t> qlevel(c.num_qubits(), 0);
    std::vector<std::size_t> clevel(c.num_clbits(), 0);
    for (const Instruction& inst : c) {
        std::size_t start = 0;
        for (int q : inst.qubits) start = std::max(start, qlevel[q]);
        if (inst.condition) start = std::max(start, clevel[inst.condition->clbit]);
        if (inst.kind == GateKind::BARRIER) {
            for (int q : inst.qubits) qlevel[q] = start;
            continue;
        }
        const std::size_t level = start + 1;
        for (int q : inst.qubits) qlevel[q] = level;
        if (inst.kind == GateKind::MEASURE) clevel[inst.clbit] = level;
        m.depth = std::max(m.depth, level);
        ++m.gate_count;
        if (inst.is_unitary()) {
            if (inst.qubits.size() == 2) ++m.cnot_count;
            if (inst.qubits.size() > 2) ++m.multi_qubit_count;
        }
    }
    return m;
}

}  // namespace qrisk

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

/**
 * @file circuit.hpp
 * @brief Circuit intermediate representation with dynamic-circuit instructions.
 *
 * Qubit 0 is the least-significant bit of a computational basis index
 * throughout the library. A controlled gate stores its control qubits first
 * and its target last in `qubits`; `CX`, `MCX` and `CPHASE` are the X and
 * PHASE kinds carrying one or more controls.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrisk {

class CircuitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GateKind : std::uint8_t { X, Y, Z, H, RX, RY, RZ, PHASE, MEASURE, RESET, BARRIER };

/// Single-bit classical condition: the instruction fires iff clbit == value.
struct Condition {
    int clbit = 0;
    int value = 1;
    bool operator==(const Condition&) const = default;
};

struct Instruction {
    GateKind kind = GateKind::X;
    std::vector<int> qubits;
    int num_controls = 0;
    double theta = 0.0;
    int clbit = -1;  // MEASURE destination
    std::optional<Condition> condition;

    bool operator==(const Instruction&) const = default;

    [[nodiscard]] bool is_unitary() const {
        return kind != GateKind::MEASURE && kind != GateKind::RESET && kind != GateKind::BARRIER;
    }
    [[nodiscard]] bool has_param() const {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ||
               kind == GateKind::PHASE;
    }
    [[nodiscard]] int target() const { return qubits.back(); }
    [[nodiscard]] std::span<const int> controls() const {
        return {qubits.data(), static_cast<std::size_t>(num_controls)};
    }
    /// Text-format mnemonic, e.g. "RY", "CX", "MCX", "CPHASE".
    [[nodiscard]] std::string name() const;

    static Instruction gate(GateKind kind, int target, double theta = 0.0);
    static Instruction controlled_gate(GateKind kind, std::vector<int> controls, int target,
                                       double theta = 0.0);
    static Instruction measure(int qubit, int clbit);
    static Instruction reset(int qubit);
    static Instruction barrier(std::vector<int> qubits);
};

/// Returns the inverse of a unitary instruction (same controls, negated angle).
Instruction inverse(const Instruction& inst);

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int num_qubits, int num_clbits = 0);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] int num_clbits() const { return num_clbits_; }
    [[nodiscard]] const std::vector<Instruction>& instructions() const { return instructions_; }
    [[nodiscard]] std::size_t size() const { return instructions_.size(); }
    [[nodiscard]] bool empty() const { return instructions_.empty(); }
    [[nodiscard]] auto begin() const { return instructions_.begin(); }
    [[nodiscard]] auto end() const { return instructions_.end(); }

    /// No Measure/Reset: the circuit has a well-defined unitary.
    [[nodiscard]] bool is_pure() const;

    /// Validates indices against the circuit width and appends.
    Circuit& append(Instruction inst);
    Circuit& append(const Circuit& other);

    Circuit& x(int q) { return append(Instruction::gate(GateKind::X, q)); }
    Circuit& y(int q) { return append(Instruction::gate(GateKind::Y, q)); }
    Circuit& z(int q) { return append(Instruction::gate(GateKind::Z, q)); }
    Circuit& h(int q) { return append(Instruction::gate(GateKind::H, q)); }
    Circuit& rx(int q, double t) { return append(Instruction::gate(GateKind::RX, q, t)); }
    Circuit& ry(int q, double t) { return append(Instruction::gate(GateKind::RY, q, t)); }
    Circuit& rz(int q, double t) { return append(Instruction::gate(GateKind::RZ, q, t)); }
    Circuit& phase(int q, double t) { return append(Instruction::gate(GateKind::PHASE, q, t)); }
    Circuit& cx(int c, int t) { return append(Instruction::controlled_gate(GateKind::X, {c}, t)); }
    Circuit& cz(int c, int t) { return append(Instruction::controlled_gate(GateKind::Z, {c}, t)); }
    Circuit& cphase(int c, int t, double th) {
        return append(Instruction::controlled_gate(GateKind::PHASE, {c}, t, th));
    }
    Circuit& cry(int c, int t, double th) {
        return append(Instruction::controlled_gate(GateKind::RY, {c}, t, th));
    }
    Circuit& mcx(std::vector<int> controls, int t) {
        return append(Instruction::controlled_gate(GateKind::X, std::move(controls), t));
    }
    Circuit& measure(int q, int c) { return append(Instruction::measure(q, c)); }
    Circuit& reset(int q) { return append(Instruction::reset(q)); }

    bool operator==(const Circuit&) const = default;

private:
    int num_qubits_ = 0;
    int num_clbits_ = 0;
    std::vector<Instruction> instructions_;
};

struct CircuitMetrics {
    std::size_t cnot_count = 0;         // two-qubit gates on the list as-is
    std::size_t multi_qubit_count = 0;  // gates touching three or more qubits
    std::size_t gate_count = 0;
    std::size_t depth = 0;
    int width = 0;
};

/// a then b. Widths must match; the classical register is the union by index.
Circuit compose(const Circuit& a, const Circuit& b);
/// k sequential repetitions of a pure circuit.
Circuit power(const Circuit& c, int k);
/// Adjoint of a pure circuit.
Circuit inverse(const Circuit& c);
/// Adds one control qubit at index c.num_qubits(): unitary is block-diag(I, U).
Circuit controlled(const Circuit& c);
/// Embeds `c` into a wider register: system qubit i maps to qubit_map[i], and
/// every unitary instruction gains `control` as an extra control.
Circuit controlled_on(const Circuit& c, int control, std::span<const int> qubit_map, int width);
/// Every instruction of a pure circuit gains the condition clbit == value.
Circuit conditioned(const Circuit& c, int clbit, int value);
/// Relabels qubits through `qubit_map` into a register of `width` qubits.
Circuit remap(const Circuit& c, std::span<const int> qubit_map, int width);
/// Same instructions on a register of `width >= c.num_qubits()` qubits.
Circuit widen(const Circuit& c, int width);

CircuitMetrics metrics(const Circuit& c);

// Text serialization, one instruction per line:
//   qubits <n>
//   clbits <m>
//   KIND q<i>[,q<j>...] [c<k>] [theta=<float>] [cond=c<k>==<0|1>]
std::string to_text(const Circuit& c);
Circuit from_text(const std::string& text);

// Pauli twirling of CX gates.
enum class Pauli : std::uint8_t { I, X, Y, Z };

struct PauliFrame {
    Pauli control = Pauli::I;
    Pauli target = Pauli::I;
};

/// Pauli pair that must follow CX when `before` precedes it, so that
/// CX * before = sign * after * CX with sign in {+1, -1}.
PauliFrame propagate_through_cx(PauliFrame before);

/// Conjugates every CX by a uniformly random Pauli pair and its propagated
/// correction. The unitary is unchanged up to global phase.
Circuit pauli_twirl(const Circuit& c, std::uint64_t seed);

}  // namespace qrisk

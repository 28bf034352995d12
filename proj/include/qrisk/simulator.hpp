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

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrisk/circuit.hpp"

namespace qrisk {

using cplx = std::complex<double>;
using Matrix2 = std::array<cplx, 4>;  // row-major

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major 2x2 matrix of the single-qubit part of a unitary instruction.
Matrix2 gate_matrix(GateKind kind, double theta);

class StateVector {
public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    /// Applies `m` to `target` on the subspace where all bits of `control_mask` are set.
    void apply(const Matrix2& m, int target, std::uint64_t control_mask = 0);
    /// Applies a unitary instruction, ignoring any classical condition.
    void apply(const Instruction& inst);

    [[nodiscard]] double probability_of_one(int qubit) const;
    /// Projects `qubit` onto `outcome` and renormalizes. Returns the branch probability.
    double collapse(int qubit, int outcome);
    [[nodiscard]] double norm() const;

private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

/// Bit-string key -> count. Keys are MSB-left: clbit 0 is the rightmost character.
struct ShotCounts {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;
};

using OutcomeDistribution = std::map<std::string, double>;

/// Per-CX noise for trajectory sampling. `pauli_probs[k]` is the probability of
/// the two-qubit Pauli with index k + 1, where index = control + 4 * target over
/// the ordering I, X, Y, Z. `zx_angle` adds exp(-i angle/2 Z_c X_t) after each CX.
struct NoiseSpec {
    std::array<double, 15> pauli_probs{};
    double zx_angle = 0.0;

    /// Uniform depolarizing-style channel with total error probability p.
    static NoiseSpec depolarizing(double p);
    static NoiseSpec coherent(double angle);
    void validate() const;
};

std::string format_bits(std::uint64_t bits, int num_clbits);
std::uint64_t parse_bits(const std::string& key);

ShotCounts run_shots(const Circuit& c, std::uint64_t shots, std::uint64_t seed,
                     const std::optional<NoiseSpec>& noise = std::nullopt);

/// Exact joint distribution over classical records by branching at every
/// Measure/Reset. At most `max_measurements` measuring instructions.
OutcomeDistribution enumerate_trajectories(const Circuit& c, int max_measurements = 20);

/// Final state of a pure circuit applied to |0...0>.
StateVector simulate(const Circuit& c);
Eigen::MatrixXcd unitary_of(const Circuit& c);
double probability_of_one(const Circuit& c, int qubit);

/// Total-variation distance between empirical counts and an exact distribution.
double total_variation(const ShotCounts& counts, const OutcomeDistribution& dist);

}  // namespace qrisk

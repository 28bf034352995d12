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
 * @file encoding.hpp
 * @brief State preparation, objective rotations, comparators and the Grover operator.
 *
 * Register layout used by every builder: data qubits 0..n-1 (qubit 0 is the
 * LSB of the bin index), the objective qubit at n, and any work qubits above.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qrisk/circuit.hpp"

namespace qrisk {

class EncodingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DiscreteDistribution {
    std::vector<double> probs;

    DiscreteDistribution() = default;
    /// Validates: size is a power of two >= 2, entries >= 0, sum = 1 within 1e-9.
    /// The vector is renormalized to sum exactly to 1.
    explicit DiscreteDistribution(std::vector<double> p);

    [[nodiscard]] int num_qubits() const;
    [[nodiscard]] std::size_t size() const { return probs.size(); }
};

DiscreteDistribution read_distribution_csv(const std::string& text);
std::string write_distribution_csv(const DiscreteDistribution& d);

/// Uniformly controlled Ry: for every assignment v of `controls` (bit b of v is
/// controls[b]) the target is rotated by Ry(angles[v]). Emitted as 2^k Ry
/// rotations interleaved with 2^k CX gates (none when there are no controls).
void append_multiplexed_ry(Circuit& c, const std::vector<int>& controls, int target,
                           const std::vector<double>& angles);

/// Binary tree of Ry rotations, most significant qubit first, giving real
/// amplitudes sqrt(p_i). Width = log2(size).
Circuit load_distribution(const DiscreteDistribution& d);

/// Per-level node angles of the rotation tree: result[L][v] rotates qubit n-1-L
/// when the more significant bits hold prefix v.
std::vector<std::vector<double>> loader_angles(const DiscreteDistribution& d);

/// f(i) = f1*i + f0 with values in [0, 1] on {0..2^n-1}; c in (0, 1].
struct LinearObjective {
    double f0 = 0.0;
    double f1 = 0.0;
    double c = 0.25;
    int n = 1;
};

/// Width n+1. For basis input i, P(objective = 1) = sin^2(pi/4 + c(f(i) - 1/2)).
Circuit linear_objective_circuit(const LinearObjective& obj);

enum class CompareDirection { LE, GE };
enum class ComparatorMode { Oracle, Decomposed };

struct ComparatorSpec {
    long long threshold = 0;
    CompareDirection direction = CompareDirection::LE;
};

/// Qubits used by comparator_circuit: n+1 in oracle mode, 2n in decomposed mode.
int comparator_width(int n, ComparatorMode mode);

/// Flips qubit n iff i <= l (LE) or i >= l (GE). Decomposed mode computes the
/// carry of i + (2^n - l) over n-1 work qubits (n+1..2n-1) and uncomputes them.
Circuit comparator_circuit(const ComparatorSpec& spec, int n, ComparatorMode mode = ComparatorMode::Oracle);

enum class Tail { Upper, Lower };
enum class RampMode { Exact, Linearized };

struct CvarObjective {
    long long threshold = 0;
    Tail tail = Tail::Upper;
    int n = 1;
    RampMode mode = RampMode::Exact;
    double c = 0.25;  // Linearized only
    ComparatorMode comparator = ComparatorMode::Oracle;
};

/// Ramp value on the tail: (i-l)/(N-1-l) for i >= l (upper, 0 when l = N-1),
/// i/l for i <= l (lower), 0 elsewhere.
double cvar_ramp(const CvarObjective& obj, long long i);

/// Width of cvar_objective_circuit.
int cvar_objective_width(const CvarObjective& obj);

/// Objective qubit n gets P(1 | i) = ramp(i) (exact mode), or
/// sin^2(pi/4 + c(ramp(i) - 1/2)) on the tail and 0 elsewhere (linearized
/// mode, which flags the tail on qubit n+1 with a comparator and uncomputes it).
Circuit cvar_objective_circuit(const CvarObjective& obj);

struct PostProcess {
    enum class Kind { Raw, LinearInverse, Cdf };
    Kind kind = Kind::Raw;
    double c = 1.0;
    double f_lo = 0.0;  // value represented by f = 0
    double f_hi = 1.0;  // value represented by f = 1
    /// Probability mass carrying the linear encoding; mass outside it has P(1) = 0.
    double weight = 1.0;
};

struct EstimationProblem {
    Circuit state_prep;
    int objective_qubit = 0;
    PostProcess post;

    void validate() const;
};

/// Loader followed by the linear objective f(i) = i/(N-1), de-normalized to [0, N-1].
EstimationProblem expectation_problem(const DiscreteDistribution& d, double c);
/// Loader followed by the LE comparator; a = P[X <= l].
EstimationProblem cdf_problem(const DiscreteDistribution& d, long long l,
                              ComparatorMode mode = ComparatorMode::Oracle);
/// Loader followed by the CVaR ramp objective.
EstimationProblem cvar_problem(const DiscreteDistribution& d, const CvarObjective& obj);

/// Q = A S_0 A^dagger S_chi, with S_chi = -Z on the objective qubit and
/// S_0 = I - 2|0><0|. Eigenphases are +-theta with a = sin^2(pi theta).
Circuit grover_operator(const EstimationProblem& p);

}  // namespace qrisk

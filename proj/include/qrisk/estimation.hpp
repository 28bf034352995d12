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
 * @file estimation.hpp
 * @brief Amplitude estimation: canonical QAE, iterative (IAE) and dynamic (DAE).
 *
 * The problem operator A acts on qubits 0..n_A-1. QAE adds m evaluation qubits
 * at n_A..n_A+m-1; DAE adds a single evaluation qubit at n_A that is measured
 * and reset once per round. In both, classical bit j holds bit j of the phase
 * integer y, so the two circuits produce identically keyed outcomes.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrisk/circuit.hpp"
#include "qrisk/encoding.hpp"
#include "qrisk/simulator.hpp"

namespace qrisk {

class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExecMode { Exact, Shots };
enum class ConfidenceInterval { ClopperPearson, Chernoff };

struct PrecisionConfig {
    int m = 3;              // QAE / DAE binary digits
    double epsilon = 0.01;  // IAE target half-width
    double alpha = 0.05;    // IAE: 1 - confidence
    std::uint64_t shots = 5000;
    ExecMode mode = ExecMode::Exact;
    std::uint64_t seed = 0;
    ConfidenceInterval interval = ConfidenceInterval::ClopperPearson;
    int max_rounds = 0;     // IAE round cap; 0 picks a generous default
    int max_qubits = 24;    // simulator budget for built circuits

    void validate() const;
};

struct AmplitudeEstimate {
    std::string method;
    double a_hat = 0.0;
    std::optional<std::pair<double, double>> interval;
    long long raw_outcome = -1;       // canonical y for QAE/DAE, last power k for IAE
    std::vector<int> bits;            // DAE: measured bits, least significant first
    std::uint64_t oracle_queries = 0;  // applications of Q
    int iterations = 0;
    std::string iterations_kind;      // "oracle powers" or "rounds"
    int circuits_submitted = 0;
    int circuit_width = 0;
    bool converged = true;
    std::vector<int> powers;          // IAE Grover powers per round
    /// Probability of each canonical y (exact mode) or frequency (shot mode).
    std::map<long long, double> outcome_probs;
};

/// QFT on m qubits: |x> -> 2^{-m/2} sum_y exp(2 pi i x y / 2^m) |y>, qubit 0 = LSB.
Circuit qft(int m);

/// H on every eval qubit, controlled-Q^{2^j} from eval qubit j, inverse QFT,
/// eval qubit j measured into classical bit j.
Circuit qae_circuit(const EstimationProblem& p, int m);

/// Iterative phase estimation on one eval qubit at index unitary.num_qubits().
/// Round r = 1..m applies H, controlled-U^{2^{m-r}}, Phase(-pi/2^j) conditioned
/// on the bit from j rounds earlier, H, and measures into classical bit r-1
/// before resetting the eval qubit.
Circuit dpe_circuit(const Circuit& unitary, const Circuit& eigenstate_prep, int m);
Circuit dae_circuit(const EstimationProblem& p, int m);

/// y -> sin^2(pi y / 2^m).
double amplitude_from_outcome(long long y, int m);
long long canonical_outcome(long long y, int m);

AmplitudeEstimate qae_canonical(const EstimationProblem& p, const PrecisionConfig& cfg);
AmplitudeEstimate dae(const EstimationProblem& p, const PrecisionConfig& cfg);
AmplitudeEstimate iae(const EstimationProblem& p, const PrecisionConfig& cfg);

/// A followed by Q^k with the objective qubit measured into classical bit 0.
Circuit iae_round_circuit(const EstimationProblem& p, int k);

/// Clopper-Pearson interval for `ones` successes in `shots` trials (real-valued counts allowed).
std::pair<double, double> clopper_pearson(double ones, double shots, double alpha);

/// Maps an estimate back to the quantity encoded by the problem.
double post_process(double a_hat, const PostProcess& post);
double post_process(const AmplitudeEstimate& est, const EstimationProblem& p);

/// |a_hat - a| bound for exact-mode QAE/DAE: pi * 2^-m.
double qae_error_bound(int m);
/// Bound on |(a - 1/2)/c + 1/2 - E[f]| for the sin^2 encoding: (2/3) c^2 max|f - 1/2|^3.
double linearization_bias_bound(double c, double max_deviation = 0.5);

}  // namespace qrisk

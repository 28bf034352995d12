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
 * @file compiler.hpp
 * @brief CX-basis decomposition, approximate compiling (AQC) and its piecewise form.
 */

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrisk/circuit.hpp"
#include "qrisk/simulator.hpp"

namespace qrisk {

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Decomposition

/// U = e^{i phase} Rz(beta) Ry(gamma) Rz(delta).
struct ZyzAngles {
    double phase = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};
ZyzAngles zyz_decompose(const Matrix2& u);

/// Rewrites a pure circuit into CX plus single-qubit gates. The unitary is
/// preserved up to global phase. Multi-controlled X with three or more controls
/// borrows idle qubits of the circuit as dirty ancillas when any exist.
Circuit decompose_to_basis(const Circuit& c);

/// ceil((4^n - 3n - 1) / 4): CX count sufficient for any n-qubit unitary.
long long cnot_lower_bound(int n);

// ---------------------------------------------------------------------------
// Parametric CX-unit networks

enum class Layout { Spin, Sequ };
enum class Connectivity { Full, Line };

/// theta holds 3n initial angles (Rz, Ry, Rz on each qubit in time order)
/// followed by 4 per unit: CX(c, t), then Ry, Rz on c and Ry, Rx on t.
struct ParamNetwork {
    int n = 1;
    Layout layout = Layout::Spin;
    Connectivity connectivity = Connectivity::Full;
    std::vector<std::pair<int, int>> placements;
    std::vector<double> theta;

    /// `depth` units placed per the layout; a single qubit gets no units.
    static ParamNetwork make(int n, int depth, Layout layout = Layout::Spin,
                             Connectivity connectivity = Connectivity::Full);

    [[nodiscard]] int depth() const { return static_cast<int>(placements.size()); }
    [[nodiscard]] std::size_t num_params() const { return 3 * static_cast<std::size_t>(n) + 4 * placements.size(); }
    [[nodiscard]] Circuit to_circuit() const;
};

Eigen::MatrixXcd network_unitary(const ParamNetwork& net);

/// |Tr(V^dagger U)| and its gradient with respect to theta.
struct TraceValue {
    std::complex<double> trace;
    std::vector<std::complex<double>> gradient;
};
TraceValue network_trace(const ParamNetwork& net, const Eigen::MatrixXcd& u, bool with_gradient = true);

/// 1 - |Tr(V^dagger U)|^2 / 4^n and its gradient: the minimized objective.
double aqc_objective(const ParamNetwork& net, const Eigen::MatrixXcd& u, std::vector<double>* grad);

/// min over phi of ||V - e^{i phi} U||_F.
double phase_aligned_distance(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& u);

struct AqcConfig {
    int depth = 10;
    Layout layout = Layout::Spin;
    Connectivity connectivity = Connectivity::Full;
    int max_iterations = 3000;
    double gradient_tolerance = 1e-12;
    int restarts = 20;
    std::uint64_t seed = 0;
    /// Stop restarting once a run reaches this distance.
    double target_distance = 1e-6;
    int lbfgs_memory = 10;
    std::optional<std::vector<double>> initial_theta;

    void validate() const;
};

struct BlockReport {
    int q_lo = 0;
    int span = 0;
    std::size_t first = 0;
    std::size_t last = 0;
    bool compiled = false;
    int depth = 0;
    double distance = 0.0;           // on the block's own 2^span space
    double embedded_distance = 0.0;  // the same error on the full register
    std::size_t cx_before = 0;
    std::size_t cx_after = 0;
};

struct CompileReport {
    double distance = 0.0;  // global, phase aligned; negative if not computed
    double fidelity = 1.0;  // |Tr(V^dagger U)| / 2^n
    bool converged = true;
    int restarts_used = 0;
    std::vector<BlockReport> blocks;
    CircuitMetrics before;
    CircuitMetrics after;
};

struct AqcResult {
    Circuit circuit;
    ParamNetwork network;
    CompileReport report;
};

/// Gradient-based search for network angles maximizing |Tr(V^dagger U)| / 2^n,
/// with L-BFGS, Armijo backtracking and random restarts.
AqcResult aqc_compile(const Eigen::MatrixXcd& u, const AqcConfig& cfg);

// ---------------------------------------------------------------------------
// Piecewise compiling

/// What pAQC does with a gate wider than m: fail, keep it verbatim as its own
/// uncompiled block, or (Ladder) rewrite long CX gates into nearest-neighbour
/// CX chains first so every block fits in m qubits.
enum class WideGatePolicy { Error, Passthrough, Ladder };

struct Block {
    int q_lo = 0;
    int span = 0;
    std::size_t first = 0;  // instruction range [first, last) in the parent
    std::size_t last = 0;
    bool compiled = true;   // false for a wide gate kept as-is
    Circuit sub;            // instructions relabeled to qubits 0..span-1
};

/// Greedy left-to-right scan: a gate joins the open block while the union of
/// the block's qubit range and the gate's range spans at most m qubits.
std::vector<Block> identify_blocks(const Circuit& c, int m, WideGatePolicy policy = WideGatePolicy::Error);

/// Replaces every CX spanning more than `max_span` qubits by an equivalent
/// chain of 4(d-1) nearest-neighbour CX gates, d = |control - target|.
Circuit expand_long_cx(const Circuit& c, int max_span);

/// Concatenates the blocks back into a circuit of the given width.
Circuit replay_blocks(const std::vector<Block>& blocks, int width);

struct PaqcConfig {
    int m = 7;
    AqcConfig block = [] {
        AqcConfig a;
        a.restarts = 2;
        a.max_iterations = 300;
        return a;
    }();
    WideGatePolicy policy = WideGatePolicy::Error;
    bool keep_cheaper_blocks = false;
    /// Global distance is computed only up to this width.
    int max_global_qubits = 12;
};

struct PaqcResult {
    Circuit circuit;
    CompileReport report;
};

/// Decomposes, partitions, compiles every block with AQC and reinserts it on
/// the block's qubit window.
PaqcResult paqc_compile(const Circuit& c, const PaqcConfig& cfg);

}  // namespace qrisk

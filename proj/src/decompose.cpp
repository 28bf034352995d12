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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "qrisk/compiler.hpp"

namespace qrisk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleEps = 1e-15;

class Emitter {
public:
    Emitter(Circuit& out, std::optional<Condition> cond) : out_(out), cond_(cond) {}

    void one(GateKind kind, int q, double theta = 0.0) {
        if ((kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::PHASE) &&
            std::abs(theta) < kAngleEps) {
            return;
        }
        Instruction inst = Instruction::gate(kind, q, theta);
        inst.condition = cond_;
        out_.append(std::move(inst));
    }

    void cx(int c, int t) {
        Instruction inst = Instruction::controlled_gate(GateKind::X, {c}, t);
        inst.condition = cond_;
        out_.append(std::move(inst));
    }

    void toffoli(int c1, int c2, int t) {
        const double q = kPi / 4;
        one(GateKind::H, t);
        cx(c2, t);
        one(GateKind::PHASE, t, -q);
        cx(c1, t);
        one(GateKind::PHASE, t, q);
        cx(c2, t);
        one(GateKind::PHASE, t, -q);
        cx(c1, t);
        one(GateKind::PHASE, c2, q);
        one(GateKind::PHASE, t, q);
        one(GateKind::H, t);
        cx(c1, c2);
        one(GateKind::PHASE, c1, q);
        one(GateKind::PHASE, c2, -q);
        cx(c1, c2);
    }

    // Controlled-U as Phase(phase) on the control plus C, CX, B, CX, A on the target.
    void controlled_u(int c, int t, const Matrix2& u) {
        const ZyzAngles z = zyz_decompose(u);
        one(GateKind::RZ, t, (z.delta - z.beta) / 2);
        cx(c, t);
        one(GateKind::RZ, t, -(z.delta + z.beta) / 2);
        one(GateKind::RY, t, -z.gamma / 2);
        cx(c, t);
        one(GateKind::RY, t, z.gamma / 2);
        one(GateKind::RZ, t, z.beta);
        one(GateKind::PHASE, c, z.phase);
    }

    // Multi-controlled X. `busy` marks qubits that may not serve as ancillas.
    void mcx(const std::vector<int>& controls, int t) {
        const int k = static_cast<int>(controls.size());
        if (k == 0) return one(GateKind::X, t);
        if (k == 1) return cx(controls[0], t);
        if (k == 2) return toffoli(controls[0], controls[1], t);
        std::vector<int> free = free_qubits(controls, t);
        if (static_cast<int>(free.size()) >= k - 2) {
            free.resize(k - 2);
            return vchain(controls, t, free);
        }
        if (!free.empty()) {
            // Split over one borrowed qubit; each half then finds enough idle qubits.
            const int a = free[0];
            const int k1 = (k + 1) / 2;
            std::vector<int> c1(controls.begin(), controls.begin() + k1);
            std::vector<int> c2(controls.begin() + k1, controls.end());
            c2.push_back(a);
            mcx(c1, a);
            mcx(c2, t);
            mcx(c1, a);
            mcx(c2, t);
            return;
        }
        mc_u(controls, t, gate_matrix(GateKind::X, 0));
    }

    // Multi-controlled single-qubit unitary via square-root recursion.
    void mc_u(const std::vector<int>& controls, int t, const Matrix2& u) {
        const int k = static_cast<int>(controls.size());
        if (k == 0) throw CompileError("internal: uncontrolled mc_u");
        if (k == 1) return controlled_u(controls[0], t, u);
        const Matrix2 v = matrix_sqrt(u);
        const Matrix2 vd = {std::conj(v[0]), std::conj(v[2]), std::conj(v[1]), std::conj(v[3])};
        const int last = controls.back();
        std::vector<int> rest(controls.begin(), controls.end() - 1);
        controlled_u(last, t, v);
        mcx(rest, last);
        controlled_u(last, t, vd);
        mcx(rest, last);
        mc_u(rest, t, v);
    }

    void mc_rotation(GateKind axis, const std::vector<int>& controls, int t, double theta) {
        one(axis, t, theta / 2);
        mcx(controls, t);
        one(axis, t, -theta / 2);
        mcx(controls, t);
    }

    void mc_phase(const std::vector<int>& controls, int t, double theta) {
        if (controls.empty()) return one(GateKind::PHASE, t, theta);
        if (controls.size() == 1) {
            one(GateKind::PHASE, controls[0], theta / 2);
            cx(controls[0], t);
            one(GateKind::PHASE, t, -theta / 2);
            cx(controls[0], t);
            one(GateKind::PHASE, t, theta / 2);
            return;
        }
        std::vector<int> rest(controls.begin(), controls.end() - 1);
        mc_phase(rest, controls.back(), theta / 2);
        mc_rotation(GateKind::RZ, controls, t, theta);
    }

    void set_width(int w) { width_ = w; }

private:
    static Matrix2 matrix_sqrt(const Matrix2& u) {
        Eigen::Matrix2cd m;
        m << u[0], u[1], u[2], u[3];
        Eigen::ComplexSchur<Eigen::Matrix2cd> schur(m);
        Eigen::Matrix2cd t = schur.matrixT();
        // Unitary matrices are normal, so the Schur form is diagonal.
        t(0, 1) = 0.0;
        t(0, 0) = std::sqrt(t(0, 0));
        t(1, 1) = std::sqrt(t(1, 1));
        const Eigen::Matrix2cd r = schur.matrixU() * t * schur.matrixU().adjoint();
        return {r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
    }

    std::vector<int> free_qubits(const std::vector<int>& controls, int t) const {
        std::vector<int> free;
        for (int q = 0; q < width_; ++q) {
            if (q == t || std::find(controls.begin(), controls.end(), q) != controls.end()) continue;
            free.push_back(q);
        }
        std::stable_sort(free.begin(), free.end(), [t](int a, int b) { return std::abs(a - t) < std::abs(b - t); });
        return free;
    }

    // C^k X with k-2 dirty ancillas, using 4(k-2) Toffoli gates.
    void vchain(const std::vector<int>& c, int t, const std::vector<int>& a) {
        const int k = static_cast<int>(c.size());
        auto ladder_down = [&] {
            for (int i = k - 2; i >= 2; --i) toffoli(c[i], a[i - 2], a[i - 1]);
        };
        auto ladder_up = [&] {
            for (int i = 2; i <= k - 2; ++i) toffoli(c[i], a[i - 2], a[i - 1]);
        };
        for (int rep = 0; rep < 2; ++rep) {
            toffoli(c[k - 1], a[k - 3], t);
            ladder_down();
            toffoli(c[0], c[1], a[0]);
            ladder_up();
        }
    }

    Circuit& out_;
    std::optional<Condition> cond_;
    int width_ = 0;
};

}  // namespace

ZyzAngles zyz_decompose(const Matrix2& u) {
    const cplx det = u[0] * u[3] - u[1] * u[2];
    ZyzAngles z;
    z.phase = std::arg(det) / 2;
    const cplx s = std::polar(1.0, -z.phase);
    const cplx v00 = u[0] * s, v10 = u[2] * s, v11 = u[3] * s;
    z.gamma = 2 * std::atan2(std::abs(v10), std::abs(v00));
    const double sum = std::abs(v11) > 1e-12 ? 2 * std::arg(v11) : 0.0;         // beta + delta
    const double diff = std::abs(v10) > 1e-12 ? 2 * std::arg(v10) : 0.0;        // beta - delta
    if (std::abs(v11) <= 1e-12) {
        // Pure off-diagonal: only beta - delta is determined.
        z.beta = diff / 2;
        z.delta = -diff / 2;
    } else if (std::abs(v10) <= 1e-12) {
        z.beta = sum / 2;
        z.delta = sum / 2;
    } else {
        z.beta = (sum + diff) / 2;
        z.delta = (sum - diff) / 2;
    }
    return z;
}

Circuit decompose_to_basis(const Circuit& c) {
    if (!c.is_pure()) throw CompileError("decompose_to_basis requires a pure circuit");
    Circuit out(c.num_qubits(), c.num_clbits());
    for (const Instruction& inst : c) {
        if (inst.kind == GateKind::BARRIER) {
            out.append(inst);
            continue;
        }
        Emitter e(out, inst.condition);
        e.set_width(c.num_qubits());
        const int t = inst.target();
        std::vector<int> ctrl(inst.controls().begin(), inst.controls().end());
        const int k = inst.num_controls;
        if (k == 0 || (k == 1 && inst.kind == GateKind::X)) {
            out.append(inst);
            continue;
        }
        switch (inst.kind) {
            case GateKind::X:
                e.mcx(ctrl, t);
                break;
            case GateKind::Y:
                e.one(GateKind::PHASE, t, -kPi / 2);
                e.mcx(ctrl, t);
                e.one(GateKind::PHASE, t, kPi / 2);
                break;
            case GateKind::Z:
                e.one(GateKind::H, t);
                e.mcx(ctrl, t);
                e.one(GateKind::H, t);
                break;
            case GateKind::H:
                if (k == 1) {
                    e.controlled_u(ctrl[0], t, gate_matrix(GateKind::H, 0));
                } else {
                    e.mc_u(ctrl, t, gate_matrix(GateKind::H, 0));
                }
                break;
            case GateKind::RX:
                e.one(GateKind::H, t);
                e.mc_rotation(GateKind::RZ, ctrl, t, inst.theta);
                e.one(GateKind::H, t);
                break;
            case GateKind::RY:
            case GateKind::RZ:
                e.mc_rotation(inst.kind, ctrl, t, inst.theta);
                break;
            case GateKind::PHASE:
                e.mc_phase(ctrl, t, inst.theta);
                break;
            default:
                throw CompileError("no decomposition rule for " + inst.name());
        }
    }
    return out;
}

long long cnot_lower_bound(int n) {
    if (n < 1 || n > 30) throw CompileError("cnot_lower_bound needs 1 <= n <= 30");
    const long long four = 1LL << (2 * n);
    const long long num = four - 3LL * n - 1;
    return (num + 3) / 4;
}

}  // namespace qrisk

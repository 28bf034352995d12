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

#include <algorithm>
#include <cmath>

#include "qrisk/compiler.hpp"

namespace qrisk {

namespace {

std::pair<int, int> qubit_range(const Instruction& inst) {
    const auto [lo, hi] = std::minmax_element(inst.qubits.begin(), inst.qubits.end());
    return {*lo, *hi};
}

Block close_block(const Circuit& c, std::size_t first, std::size_t last, int lo, int hi, bool compiled) {
    Block b;
    b.first = first;
    b.last = last;
    b.compiled = compiled;
    if (hi < lo) {  // barriers only
        lo = hi = 0;
        for (std::size_t i = first; i < last; ++i) {
            if (!c.instructions()[i].qubits.empty()) {
                lo = hi = c.instructions()[i].qubits[0];
                break;
            }
        }
    }
    b.q_lo = lo;
    b.span = hi - lo + 1;
    b.sub = Circuit(b.span);
    for (std::size_t i = first; i < last; ++i) {
        Instruction inst = c.instructions()[i];
        inst.condition.reset();
        std::vector<int> kept;
        for (int q : inst.qubits) {
            if (q >= lo && q <= hi) kept.push_back(q - lo);
        }
        if (inst.kind == GateKind::BARRIER) {
            inst.qubits = kept;
        } else {
            for (int& q : inst.qubits) q -= lo;
        }
        b.sub.append(std::move(inst));
    }
    return b;
}

}  // namespace

Circuit expand_long_cx(const Circuit& c, int max_span) {
    if (max_span < 2) throw CompileError("expand_long_cx needs max_span >= 2");
    Circuit out(c.num_qubits(), c.num_clbits());
    for (const Instruction& inst : c) {
        const bool long_cx = inst.kind == GateKind::X && inst.num_controls == 1 &&
                             std::abs(inst.qubits[0] - inst.qubits[1]) + 1 > max_span;
        if (!long_cx) {
            out.append(inst);
            continue;
        }
        // Path p_0 = control .. p_d = target over adjacent qubits.
        const int ctrl = inst.qubits[0], tgt = inst.qubits[1];
        const int step = tgt > ctrl ? 1 : -1;
        const int d = std::abs(tgt - ctrl);
        const auto p = [&](int i) { return ctrl + step * i; };
        for (int i = d - 1; i >= 0; --i) out.cx(p(i), p(i + 1));
        for (int i = 1; i <= d - 1; ++i) out.cx(p(i), p(i + 1));
        for (int i = d - 2; i >= 0; --i) out.cx(p(i), p(i + 1));
        for (int i = 1; i <= d - 2; ++i) out.cx(p(i), p(i + 1));
    }
    return out;
}

std::vector<Block> identify_blocks(const Circuit& c, int m, WideGatePolicy policy) {
    if (m < 1) throw CompileError("block span m must be >= 1");
    if (!c.is_pure()) throw CompileError("identify_blocks requires a pure circuit");
    std::vector<Block> blocks;
    const auto& ins = c.instructions();
    std::size_t first = 0;
    int lo = 1 << 30, hi = -1;
    auto flush = [&](std::size_t end) {
        if (end > first) blocks.push_back(close_block(c, first, end, lo, hi, true));
        first = end;
        lo = 1 << 30;
        hi = -1;
    };
    for (std::size_t i = 0; i < ins.size(); ++i) {
        const Instruction& inst = ins[i];
        if (inst.condition) throw CompileError("conditioned gates cannot be blocked");
        if (inst.kind == GateKind::BARRIER || inst.qubits.empty()) continue;
        const auto [glo, ghi] = qubit_range(inst);
        if (ghi - glo + 1 > m) {
            if (policy != WideGatePolicy::Passthrough) {
                throw CompileError("gate #" + std::to_string(i) + " " + inst.name() + " spans qubits " +
                                   std::to_string(glo) + ".." + std::to_string(ghi) + ", wider than m = " +
                                   std::to_string(m));
            }
            flush(i);
            blocks.push_back(close_block(c, i, i + 1, glo, ghi, false));
            first = i + 1;
            continue;
        }
        const int nlo = std::min(lo, glo), nhi = std::max(hi, ghi);
        if (hi >= 0 && nhi - nlo + 1 > m) {
            flush(i);
            lo = glo;
            hi = ghi;
        } else {
            lo = nlo;
            hi = nhi;
        }
    }
    flush(ins.size());
    return blocks;
}

Circuit replay_blocks(const std::vector<Block>& blocks, int width) {
    Circuit out(width);
    for (const Block& b : blocks) {
        std::vector<int> map(b.span);
        for (int i = 0; i < b.span; ++i) map[i] = b.q_lo + i;
        out.append(remap(b.sub, map, width));
    }
    return out;
}

PaqcResult paqc_compile(const Circuit& c, const PaqcConfig& cfg) {
    if (!c.is_pure()) throw CompileError("paqc requires a pure circuit");
    cfg.block.validate();
    Circuit basis = decompose_to_basis(c);
    if (cfg.policy == WideGatePolicy::Ladder) basis = expand_long_cx(basis, std::max(cfg.m, 2));
    const std::vector<Block> blocks = identify_blocks(basis, cfg.m, cfg.policy);
    const int n = c.num_qubits();
    PaqcResult res;
    res.circuit = Circuit(n, c.num_clbits());
    res.report.before = metrics(basis);
    res.report.distance = 0.0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const Block& b = blocks[bi];
        std::vector<int> map(b.span);
        for (int i = 0; i < b.span; ++i) map[i] = b.q_lo + i;
        BlockReport br;
        br.q_lo = b.q_lo;
        br.span = b.span;
        br.first = b.first;
        br.last = b.last;
        br.compiled = b.compiled;
        br.cx_before = metrics(b.sub).cnot_count;
        Circuit replacement = b.sub;
        if (b.compiled && b.span > 10) throw CompileError("block wider than the AQC limit of 10 qubits");
        if (b.compiled) {
            AqcConfig bc = cfg.block;
            bc.seed = cfg.block.seed + bi;
            const Eigen::MatrixXcd target = unitary_of(b.sub);
            AqcResult r = aqc_compile(target, bc);
            br.depth = r.network.depth();
            const bool keep = cfg.keep_cheaper_blocks && br.cx_before <= r.report.after.cnot_count;
            if (keep) {
                br.compiled = false;
            } else {
                replacement = r.circuit;
                br.distance = r.report.distance;
                res.report.converged = res.report.converged && r.report.converged;
                res.report.restarts_used += r.report.restarts_used;
            }
        }
        br.embedded_distance = br.distance * std::sqrt(std::ldexp(1.0, n - b.span));
        br.cx_after = metrics(replacement).cnot_count;
        res.circuit.append(remap(replacement, map, n));
        res.report.blocks.push_back(br);
    }
    res.report.after = metrics(res.circuit);
    if (n <= cfg.max_global_qubits && n >= 1) {
        const Eigen::MatrixXcd u = unitary_of(c);
        const Eigen::MatrixXcd v = unitary_of(res.circuit);
        res.report.distance = phase_aligned_distance(v, u);
        res.report.fidelity = std::abs((v.conjugate().cwiseProduct(u)).sum()) / static_cast<double>(u.rows());
    } else {
        res.report.distance = -1.0;
        res.report.fidelity = -1.0;
    }
    return res;
}

}  // namespace qrisk

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

#include "qrisk/simulator.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <set>

#include "qrisk/random.hpp"

namespace qrisk {

namespace {

constexpr double kPruneProbability = 1e-14;
// Amplitudes kept alive by the branch cache in run_shots (16 bytes each).
constexpr std::size_t kCacheAmplitudeBudget = std::size_t{1} << 22;

void apply_kernel(cplx* a, int n, const Matrix2& m, int target, std::uint64_t cmask) {
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const std::uint64_t low = tbit - 1;
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    const cplx m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
    for (std::uint64_t k = 0; k < half; ++k) {
        const std::uint64_t i = ((k & ~low) << 1) | (k & low);
        if ((i & cmask) != cmask) continue;
        const std::uint64_t j = i | tbit;
        const cplx u = a[i], v = a[j];
        a[i] = m00 * u + m01 * v;
        a[j] = m10 * u + m11 * v;
    }
}

std::uint64_t control_mask(const Instruction& inst) {
    std::uint64_t mask = 0;
    for (int q : inst.controls()) mask |= std::uint64_t{1} << q;
    return mask;
}

void check_width(const Circuit& c) {
    if (c.num_qubits() < 1 || c.num_qubits() > 30) {
        throw SimulationError("simulator supports 1..30 qubits, got " + std::to_string(c.num_qubits()));
    }
    if (c.num_clbits() > 64) throw SimulationError("at most 64 classical bits are supported");
}

// Classical record of one trajectory.
struct Record {
    std::uint64_t bits = 0;
    std::uint64_t written = 0;
};

bool condition_holds(const Instruction& inst, const Record& rec) {
    if (!inst.condition) return true;
    const std::uint64_t b = std::uint64_t{1} << inst.condition->clbit;
    if (!(rec.written & b)) {
        throw SimulationError("classical bit c" + std::to_string(inst.condition->clbit) +
                              " read before it was written");
    }
    return static_cast<int>((rec.bits & b) != 0) == inst.condition->value;
}

bool is_measuring(const Instruction& inst) {
    return inst.kind == GateKind::MEASURE || inst.kind == GateKind::RESET;
}

void record_outcome(const Instruction& inst, int outcome, StateVector& sv, Record& rec) {
    if (inst.kind == GateKind::MEASURE) {
        const std::uint64_t b = std::uint64_t{1} << inst.clbit;
        rec.written |= b;
        rec.bits = outcome ? (rec.bits | b) : (rec.bits & ~b);
    } else if (outcome == 1) {
        sv.apply(gate_matrix(GateKind::X, 0), inst.qubits[0]);
    }
}

void apply_noise(const NoiseSpec& noise, const Instruction& cx, StateVector& sv, Rng& rng) {
    const int c = cx.qubits[0], t = cx.qubits[1];
    double total = 0.0;
    for (double p : noise.pauli_probs) total += p;
    if (total > 0.0) {
        const double u = rng.uniform();
        double acc = 0.0;
        for (int k = 0; k < 15; ++k) {
            acc += noise.pauli_probs[k];
            if (u < acc) {
                static constexpr GateKind kinds[] = {GateKind::X, GateKind::X, GateKind::Y, GateKind::Z};
                const int idx = k + 1;
                if (idx % 4) sv.apply(gate_matrix(kinds[idx % 4], 0), c);
                if (idx / 4) sv.apply(gate_matrix(kinds[idx / 4], 0), t);
                break;
            }
        }
    }
    if (noise.zx_angle != 0.0) {
        const Matrix2 h = gate_matrix(GateKind::H, 0);
        const Matrix2 x = gate_matrix(GateKind::X, 0);
        sv.apply(h, t);
        sv.apply(x, t, std::uint64_t{1} << c);
        sv.apply(gate_matrix(GateKind::RZ, noise.zx_angle), t);
        sv.apply(x, t, std::uint64_t{1} << c);
        sv.apply(h, t);
    }
}

bool is_cx(const Instruction& inst) { return inst.kind == GateKind::X && inst.num_controls == 1; }

// Runs unitary and barrier instructions from `pc` until the next measuring
// instruction (returned) or the end of the circuit.
std::size_t advance(const Circuit& c, std::size_t pc, StateVector& sv, const Record& rec,
                    const NoiseSpec* noise, Rng* rng) {
    const auto& ins = c.instructions();
    for (; pc < ins.size(); ++pc) {
        const Instruction& inst = ins[pc];
        if (is_measuring(inst)) return pc;
        if (!inst.is_unitary()) continue;
        if (!condition_holds(inst, rec)) continue;
        sv.apply(inst);
        if (noise && is_cx(inst)) apply_noise(*noise, inst, sv, *rng);
    }
    return pc;
}

int sample_outcome(double p1, Rng& rng) { return rng.uniform() < 1.0 - p1 ? 0 : 1; }

// Lazily built outcome tree shared across noiseless shots. Each node holds the
// state just before a measuring instruction; children are built on first visit.
struct BranchNode {
    std::size_t pc = 0;
    std::unique_ptr<StateVector> state;
    Record rec;
    double p1 = 0.0;
    std::unique_ptr<BranchNode> child[2];
};

class BranchCache {
public:
    explicit BranchCache(const Circuit& c) : c_(c) {
        StateVector sv(c.num_qubits());
        root_ = make_node(std::move(sv), 0, Record{});
    }

    std::uint64_t sample(Rng& rng) {
        BranchNode* node = root_.get();
        while (node->pc < c_.size()) {
            const int outcome = sample_outcome(node->p1, rng);
            if (!node->child[outcome]) {
                if (used_ >= kCacheAmplitudeBudget) return finish_uncached(*node, outcome, rng);
                StateVector sv = *node->state;
                Record rec = node->rec;
                step(node->pc, outcome, sv, rec);
                node->child[outcome] = make_node(std::move(sv), node->pc + 1, rec);
            }
            node = node->child[outcome].get();
        }
        return node->rec.bits;
    }

private:
    void step(std::size_t pc, int outcome, StateVector& sv, Record& rec) const {
        const Instruction& inst = c_.instructions()[pc];
        sv.collapse(inst.qubits[0], outcome);
        record_outcome(inst, outcome, sv, rec);
    }

    std::unique_ptr<BranchNode> make_node(StateVector sv, std::size_t pc, Record rec) {
        auto node = std::make_unique<BranchNode>();
        node->pc = advance(c_, pc, sv, rec, nullptr, nullptr);
        node->rec = rec;
        if (node->pc < c_.size()) {
            node->p1 = sv.probability_of_one(c_.instructions()[node->pc].qubits[0]);
            used_ += sv.amplitudes().size();
            node->state = std::make_unique<StateVector>(std::move(sv));
        }
        return node;
    }

    std::uint64_t finish_uncached(const BranchNode& node, int outcome, Rng& rng) const {
        StateVector sv = *node.state;
        Record rec = node.rec;
        std::size_t pc = node.pc;
        step(pc, outcome, sv, rec);
        pc = advance(c_, pc + 1, sv, rec, nullptr, nullptr);
        while (pc < c_.size()) {
            const int o = sample_outcome(sv.probability_of_one(c_.instructions()[pc].qubits[0]), rng);
            step(pc, o, sv, rec);
            pc = advance(c_, pc + 1, sv, rec, nullptr, nullptr);
        }
        return rec.bits;
    }

    const Circuit& c_;
    std::unique_ptr<BranchNode> root_;
    std::size_t used_ = 0;
};

std::uint64_t run_noisy_shot(const Circuit& c, const NoiseSpec& noise, Rng& rng) {
    StateVector sv(c.num_qubits());
    Record rec;
    std::size_t pc = advance(c, 0, sv, rec, &noise, &rng);
    while (pc < c.size()) {
        const Instruction& inst = c.instructions()[pc];
        const int o = sample_outcome(sv.probability_of_one(inst.qubits[0]), rng);
        sv.collapse(inst.qubits[0], o);
        record_outcome(inst, o, sv, rec);
        pc = advance(c, pc + 1, sv, rec, &noise, &rng);
    }
    return rec.bits;
}

}  // namespace

Matrix2 gate_matrix(GateKind kind, double theta) {
    using namespace std::complex_literals;
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double r = 1.0 / std::numbers::sqrt2;
    switch (kind) {
        case GateKind::X: return {0, 1, 1, 0};
        case GateKind::Y: return {0, -1i, 1i, 0};
        case GateKind::Z: return {1, 0, 0, -1};
        case GateKind::H: return {r, r, r, -r};
        case GateKind::RX: return {c, -1i * s, -1i * s, c};
        case GateKind::RY: return {c, -s, s, c};
        case GateKind::RZ: return {std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)};
        case GateKind::PHASE: return {1, 0, 0, std::polar(1.0, theta)};
        default: break;
    }
    throw SimulationError("no matrix for non-unitary instruction");
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 30) throw SimulationError("bad qubit count");
    amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

void StateVector::apply(const Matrix2& m, int target, std::uint64_t cmask) {
    apply_kernel(amps_.data(), num_qubits_, m, target, cmask);
}

void StateVector::apply(const Instruction& inst) {
    apply(gate_matrix(inst.kind, inst.theta), inst.target(), control_mask(inst));
}

double StateVector::probability_of_one(int qubit) const {
    const std::uint64_t b = std::uint64_t{1} << qubit;
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & b) p += std::norm(amps_[i]);
    }
    return std::min(1.0, std::max(0.0, p));
}

double StateVector::collapse(int qubit, int outcome) {
    const std::uint64_t b = std::uint64_t{1} << qubit;
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (((i & b) != 0) == (outcome == 1)) p += std::norm(amps_[i]);
    }
    if (p <= 0.0) throw SimulationError("collapse onto a zero-probability outcome");
    const double scale = 1.0 / std::sqrt(p);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (((i & b) != 0) == (outcome == 1)) {
            amps_[i] *= scale;
        } else {
            amps_[i] = 0.0;
        }
    }
    return p;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

NoiseSpec NoiseSpec::depolarizing(double p) {
    NoiseSpec n;
    n.pauli_probs.fill(p / 15.0);
    n.validate();
    return n;
}

NoiseSpec NoiseSpec::coherent(double angle) {
    NoiseSpec n;
    n.zx_angle = angle;
    return n;
}

void NoiseSpec::validate() const {
    double total = 0.0;
    for (double p : pauli_probs) {
        if (!(p >= 0.0)) throw SimulationError("noise probabilities must be non-negative");
        total += p;
    }
    if (total > 1.0 + 1e-12) throw SimulationError("noise probabilities sum above 1");
    if (!std::isfinite(zx_angle)) throw SimulationError("non-finite over-rotation angle");
}

std::string format_bits(std::uint64_t bits, int num_clbits) {
    std::string s(static_cast<std::size_t>(num_clbits), '0');
    for (int i = 0; i < num_clbits; ++i) {
        if (bits >> i & 1) s[num_clbits - 1 - i] = '1';
    }
    return s;
}

std::uint64_t parse_bits(const std::string& key) {
    std::uint64_t v = 0;
    for (char ch : key) {
        if (ch != '0' && ch != '1') throw SimulationError("bad bit string '" + key + "'");
        v = (v << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return v;
}

ShotCounts run_shots(const Circuit& c, std::uint64_t shots, std::uint64_t seed,
                     const std::optional<NoiseSpec>& noise) {
    if (shots < 1) throw SimulationError("shots must be at least 1");
    check_width(c);
    if (noise) noise->validate();
    std::map<std::uint64_t, std::uint64_t> raw;
    if (noise) {
        for (std::uint64_t s = 0; s < shots; ++s) {
            Rng rng(derive_seed(seed, s));
            ++raw[run_noisy_shot(c, *noise, rng)];
        }
    } else {
        BranchCache cache(c);
        for (std::uint64_t s = 0; s < shots; ++s) {
            Rng rng(derive_seed(seed, s));
            ++raw[cache.sample(rng)];
        }
    }
    ShotCounts out;
    out.shots = shots;
    for (const auto& [bits, n] : raw) out.counts[format_bits(bits, c.num_clbits())] += n;
    return out;
}

OutcomeDistribution enumerate_trajectories(const Circuit& c, int max_measurements) {
    check_width(c);
    int measuring = 0;
    for (const Instruction& inst : c) measuring += is_measuring(inst);
    if (measuring > max_measurements) {
        throw SimulationError("trajectory budget exceeded: " + std::to_string(measuring) +
                              " measurements > " + std::to_string(max_measurements));
    }
    std::map<std::uint64_t, double> raw;
    struct Frame {
        StateVector sv;
        std::size_t pc;
        Record rec;
        double prob;
    };
    std::vector<Frame> stack;
    stack.push_back({StateVector(c.num_qubits()), 0, Record{}, 1.0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        f.pc = advance(c, f.pc, f.sv, f.rec, nullptr, nullptr);
        if (f.pc == c.size()) {
            raw[f.rec.bits] += f.prob;
            continue;
        }
        const Instruction& inst = c.instructions()[f.pc];
        const double p1 = f.sv.probability_of_one(inst.qubits[0]);
        int outcomes[2];
        int k = 0;
        for (int outcome = 0; outcome < 2; ++outcome) {
            const double p = outcome ? p1 : 1.0 - p1;
            if (p > 0.0 && f.prob * p >= kPruneProbability) outcomes[k++] = outcome;
        }
        for (int i = 0; i < k; ++i) {
            const int outcome = outcomes[i];
            Frame child = i + 1 == k ? std::move(f) : Frame{f.sv, f.pc, f.rec, f.prob};
            child.sv.collapse(inst.qubits[0], outcome);
            record_outcome(inst, outcome, child.sv, child.rec);
            child.prob *= outcome ? p1 : 1.0 - p1;
            child.pc += 1;
            stack.push_back(std::move(child));
        }
    }
    OutcomeDistribution out;
    double total = 0.0;
    for (const auto& [bits, p] : raw) {
        out[format_bits(bits, c.num_clbits())] += p;
        total += p;
    }
    if (total < 1.0 - 1e-10) throw SimulationError("pruned probability mass exceeds 1e-10");
    return out;
}

StateVector simulate(const Circuit& c) {
    if (!c.is_pure()) throw SimulationError("simulate requires a pure circuit");
    check_width(c);
    StateVector sv(c.num_qubits());
    advance(c, 0, sv, Record{}, nullptr, nullptr);
    return sv;
}

Eigen::MatrixXcd unitary_of(const Circuit& c) {
    if (!c.is_pure()) throw SimulationError("unitary_of requires a pure circuit");
    check_width(c);
    const int n = c.num_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    Record rec;
    for (const Instruction& inst : c) {
        if (!inst.is_unitary()) continue;
        if (!condition_holds(inst, rec)) continue;
        const Matrix2 m = gate_matrix(inst.kind, inst.theta);
        const std::uint64_t cm = control_mask(inst);
        for (Eigen::Index col = 0; col < dim; ++col) {
            apply_kernel(u.data() + col * dim, n, m, inst.target(), cm);
        }
    }
    return u;
}

double probability_of_one(const Circuit& c, int qubit) {
    if (qubit < 0 || qubit >= c.num_qubits()) throw SimulationError("qubit out of range");
    return simulate(c).probability_of_one(qubit);
}

double total_variation(const ShotCounts& counts, const OutcomeDistribution& dist) {
    std::set<std::string> keys;
    for (const auto& [k, v] : counts.counts) keys.insert(k);
    for (const auto& [k, v] : dist) keys.insert(k);
    double tv = 0.0;
    for (const auto& k : keys) {
        const auto it = counts.counts.find(k);
        const double emp = it == counts.counts.end() ? 0.0 : static_cast<double>(it->second) / counts.shots;
        const auto jt = dist.find(k);
        const double p = jt == dist.end() ? 0.0 : jt->second;
        tv += std::abs(emp - p);
    }
    return 0.5 * tv;
}

}  // namespace qrisk

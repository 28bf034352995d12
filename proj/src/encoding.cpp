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

#include "qrisk/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qrisk {

namespace {

int gray(int i) { return i ^ (i >> 1); }

void check_n(int n) {
    if (n < 1 || n > 20) throw EncodingError("data register must have 1..20 qubits");
}

// X on every data qubit whose bit in `value` is zero.
void flip_zeros(Circuit& c, long long value, int n) {
    for (int q = 0; q < n; ++q) {
        if (!(value >> q & 1)) c.x(q);
    }
}

std::vector<int> range(int lo, int hi) {
    std::vector<int> v;
    for (int q = lo; q < hi; ++q) v.push_back(q);
    return v;
}

// Flips `target` for every basis value in [lo, hi) of the data register,
// choosing the smaller of the set and its complement.
void flip_on_range(Circuit& c, long long lo, long long hi, int n, int target) {
    const long long size = 1LL << n;
    lo = std::clamp(lo, 0LL, size);
    hi = std::clamp(hi, lo, size);
    const long long count = hi - lo;
    const bool complement = count > size / 2;
    if (complement) c.x(target);
    for (long long v = 0; v < size; ++v) {
        const bool inside = v >= lo && v < hi;
        if (inside == complement) continue;
        flip_zeros(c, v, n);
        c.mcx(range(0, n), target);
        flip_zeros(c, v, n);
    }
}

// Writes carry_j of i + t into `out`, given carry_{j-1} on `prev` (j > 0).
void carry_step(Circuit& c, int j, bool t_bit, int prev, int out) {
    if (j == 0) {
        if (t_bit) c.cx(0, out);
        return;
    }
    if (t_bit) {
        c.x(j);
        c.x(prev);
        c.mcx({j, prev}, out);
        c.x(out);
        c.x(prev);
        c.x(j);
    } else {
        c.mcx({j, prev}, out);
    }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> p) : probs(std::move(p)) {
    if (probs.size() < 2 || !std::has_single_bit(probs.size())) {
        throw EncodingError("distribution size must be a power of two >= 2");
    }
    double total = 0.0;
    for (double v : probs) {
        if (!std::isfinite(v) || v < 0.0) throw EncodingError("probabilities must be finite and >= 0");
        total += v;
    }
    if (total <= 0.0) throw EncodingError("zero-norm distribution");
    if (std::abs(total - 1.0) > 1e-9) throw EncodingError("probabilities must sum to 1");
    for (double& v : probs) v /= total;
}

int DiscreteDistribution::num_qubits() const { return std::countr_zero(probs.size()); }

DiscreteDistribution read_distribution_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<long long, double>> rows;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.find_first_not_of("0123456789.,-+eE ") != std::string::npos) continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw EncodingError("distribution CSV row needs index,probability");
        try {
            std::size_t used = 0;
            const long long idx = std::stoll(line.substr(0, comma), &used);
            const double p = std::stod(line.substr(comma + 1));
            rows.emplace_back(idx, p);
        } catch (const std::logic_error&) {
            throw EncodingError("bad distribution CSV row '" + line + "'");
        }
    }
    std::vector<double> probs(rows.size(), -1.0);
    for (auto [i, p] : rows) {
        if (i < 0 || i >= static_cast<long long>(rows.size()) || probs[i] >= 0.0) {
            throw EncodingError("distribution CSV indices must be 0..N-1 without repeats");
        }
        probs[i] = p;
    }
    return DiscreteDistribution(std::move(probs));
}

std::string write_distribution_csv(const DiscreteDistribution& d) {
    std::ostringstream out;
    out << "index,probability\n";
    char buf[40];
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", d.probs[i]);
        out << i << "," << buf << "\n";
    }
    return out.str();
}

void append_multiplexed_ry(Circuit& c, const std::vector<int>& controls, int target,
                           const std::vector<double>& angles) {
    const int k = static_cast<int>(controls.size());
    const int size = 1 << k;
    if (static_cast<int>(angles.size()) != size) throw EncodingError("multiplexor needs 2^k angles");
    if (k == 0) {
        if (angles[0] != 0.0) c.ry(target, angles[0]);
        return;
    }
    // theta_i = 2^-k sum_v (-1)^{popcount(v & gray(i))} alpha_v
    std::vector<double> theta(size, 0.0);
    for (int i = 0; i < size; ++i) {
        double s = 0.0;
        for (int v = 0; v < size; ++v) {
            s += (std::popcount(static_cast<unsigned>(v & gray(i))) & 1) ? -angles[v] : angles[v];
        }
        theta[i] = s / size;
    }
    for (int i = 0; i < size; ++i) {
        c.ry(target, theta[i]);
        const int diff = gray(i) ^ gray((i + 1) % size);
        c.cx(controls[std::countr_zero(static_cast<unsigned>(diff))], target);
    }
}

std::vector<std::vector<double>> loader_angles(const DiscreteDistribution& d) {
    const int n = d.num_qubits();
    std::vector<std::vector<double>> out(n);
    for (int level = 0; level < n; ++level) {
        const int t = n - 1 - level;
        const std::size_t nodes = std::size_t{1} << level;
        const std::size_t block = std::size_t{1} << (t + 1);
        out[level].assign(nodes, 0.0);
        for (std::size_t v = 0; v < nodes; ++v) {
            double node = 0.0, left = 0.0;
            for (std::size_t i = v * block; i < (v + 1) * block; ++i) {
                node += d.probs[i];
                if (!(i >> t & 1)) left += d.probs[i];
            }
            if (node <= 0.0) continue;
            out[level][v] = 2.0 * std::acos(std::sqrt(std::clamp(left / node, 0.0, 1.0)));
        }
    }
    return out;
}

Circuit load_distribution(const DiscreteDistribution& d) {
    const int n = d.num_qubits();
    check_n(n);
    const auto angles = loader_angles(d);
    Circuit c(n);
    for (int level = 0; level < n; ++level) {
        const int t = n - 1 - level;
        // Prefix value v reads bits t+1..n-1; bit b of v is qubit t+1+b.
        append_multiplexed_ry(c, range(t + 1, n), t, angles[level]);
    }
    return c;
}

Circuit linear_objective_circuit(const LinearObjective& obj) {
    check_n(obj.n);
    if (!(obj.c > 0.0) || obj.c > 1.0) throw EncodingError("scaling constant c must be in (0, 1]");
    const double last = obj.f0 + obj.f1 * static_cast<double>((1LL << obj.n) - 1);
    const double tol = 1e-12;
    if (obj.f0 < -tol || obj.f0 > 1 + tol || last < -tol || last > 1 + tol) {
        throw EncodingError("objective f must map the domain into [0, 1]");
    }
    Circuit c(obj.n + 1);
    c.ry(obj.n, std::numbers::pi / 2 + 2 * obj.c * (obj.f0 - 0.5));
    for (int j = 0; j < obj.n; ++j) {
        const double angle = 2 * obj.c * obj.f1 * static_cast<double>(1LL << j);
        if (angle != 0.0) c.cry(j, obj.n, angle);
    }
    return c;
}

int comparator_width(int n, ComparatorMode mode) {
    return mode == ComparatorMode::Oracle ? n + 1 : 2 * n;
}

Circuit comparator_circuit(const ComparatorSpec& spec, int n, ComparatorMode mode) {
    check_n(n);
    const long long size = 1LL << n;
    if (spec.threshold < 0 || spec.threshold >= size) {
        throw EncodingError("comparator threshold " + std::to_string(spec.threshold) + " outside [0, " +
                            std::to_string(size - 1) + "]");
    }
    const bool le = spec.direction == CompareDirection::LE;
    // LE(l) is GE(l + 1) followed by a flip.
    const long long ge = le ? spec.threshold + 1 : spec.threshold;
    Circuit c(comparator_width(n, mode));
    if (mode == ComparatorMode::Oracle) {
        flip_on_range(c, ge, size, n, n);
    } else if (ge == 0) {
        c.x(n);
    } else if (ge < size) {
        const long long t = size - ge;
        auto work = [n](int j) { return j == n - 1 ? n : n + 1 + j; };
        for (int j = 0; j < n; ++j) carry_step(c, j, t >> j & 1, j > 0 ? work(j - 1) : -1, work(j));
        for (int j = n - 2; j >= 0; --j) carry_step(c, j, t >> j & 1, j > 0 ? work(j - 1) : -1, work(j));
    }
    if (le) c.x(n);
    return c;
}

double cvar_ramp(const CvarObjective& obj, long long i) {
    const long long last = (1LL << obj.n) - 1;
    if (obj.tail == Tail::Upper) {
        if (i < obj.threshold || obj.threshold == last) return 0.0;
        return static_cast<double>(i - obj.threshold) / static_cast<double>(last - obj.threshold);
    }
    if (obj.threshold == 0) throw EncodingError("lower-tail ramp i/l is undefined for l = 0");
    return i <= obj.threshold ? static_cast<double>(i) / static_cast<double>(obj.threshold) : 0.0;
}

int cvar_objective_width(const CvarObjective& obj) {
    if (obj.mode == RampMode::Exact) return obj.n + 1;
    return obj.comparator == ComparatorMode::Oracle ? obj.n + 2 : 2 * obj.n + 1;
}

Circuit cvar_objective_circuit(const CvarObjective& obj) {
    check_n(obj.n);
    const int n = obj.n;
    const long long size = 1LL << n;
    if (obj.threshold < 0 || obj.threshold >= size) throw EncodingError("CVaR threshold out of range");
    if (obj.tail == Tail::Lower && obj.threshold == 0) {
        throw EncodingError("empty tail: lower-tail CVaR needs l > 0");
    }
    Circuit c(cvar_objective_width(obj));
    if (obj.mode == RampMode::Exact) {
        std::vector<double> angles(size);
        for (long long i = 0; i < size; ++i) {
            angles[i] = 2.0 * std::asin(std::sqrt(std::clamp(cvar_ramp(obj, i), 0.0, 1.0)));
        }
        append_multiplexed_ry(c, range(0, n), n, angles);
        return c;
    }
    if (!(obj.c > 0.0) || obj.c > 1.0) throw EncodingError("scaling constant c must be in (0, 1]");
    ComparatorSpec spec;
    spec.threshold = obj.threshold;
    spec.direction = obj.tail == Tail::Upper ? CompareDirection::GE : CompareDirection::LE;
    const Circuit cmp = comparator_circuit(spec, n, obj.comparator);
    // Comparator output goes to the flag qubit n+1; its work qubits sit above.
    std::vector<int> map(cmp.num_qubits());
    for (int q = 0; q < n; ++q) map[q] = q;
    map[n] = n + 1;
    for (int q = n + 1; q < cmp.num_qubits(); ++q) map[q] = q + 1;
    const Circuit flag = remap(cmp, map, c.num_qubits());
    // Ramp g(i) = slope * i + offset on the tail.
    double slope = 0.0, offset = 0.0;
    if (obj.tail == Tail::Lower) {
        slope = 1.0 / static_cast<double>(obj.threshold);
    } else if (obj.threshold < size - 1) {
        slope = 1.0 / static_cast<double>(size - 1 - obj.threshold);
        offset = -slope * static_cast<double>(obj.threshold);
    }
    c.append(flag);
    c.cry(n + 1, n, std::numbers::pi / 2 + 2 * obj.c * (offset - 0.5));
    for (int j = 0; j < n; ++j) {
        c.append(Instruction::controlled_gate(GateKind::RY, {n + 1, j}, n,
                                              2 * obj.c * slope * static_cast<double>(1LL << j)));
    }
    c.append(inverse(flag));
    return c;
}

void EstimationProblem::validate() const {
    if (!state_prep.is_pure()) throw EncodingError("state preparation must be a pure circuit");
    if (objective_qubit < 0 || objective_qubit >= state_prep.num_qubits()) {
        throw EncodingError("objective qubit outside the state preparation register");
    }
    if (post.kind == PostProcess::Kind::LinearInverse && post.c == 0.0) {
        throw EncodingError("linear post-processing needs c != 0");
    }
}

EstimationProblem expectation_problem(const DiscreteDistribution& d, double c) {
    const int n = d.num_qubits();
    const double last = static_cast<double>(d.size() - 1);
    LinearObjective obj{0.0, 1.0 / last, c, n};
    EstimationProblem p;
    p.state_prep = compose(widen(load_distribution(d), n + 1), linear_objective_circuit(obj));
    p.objective_qubit = n;
    p.post = {PostProcess::Kind::LinearInverse, c, 0.0, last, 1.0};
    return p;
}

EstimationProblem cdf_problem(const DiscreteDistribution& d, long long l, ComparatorMode mode) {
    const int n = d.num_qubits();
    const Circuit cmp = comparator_circuit({l, CompareDirection::LE}, n, mode);
    EstimationProblem p;
    p.state_prep = compose(widen(load_distribution(d), cmp.num_qubits()), cmp);
    p.objective_qubit = n;
    p.post.kind = PostProcess::Kind::Cdf;
    return p;
}

EstimationProblem cvar_problem(const DiscreteDistribution& d, const CvarObjective& obj) {
    if (obj.n != d.num_qubits()) throw EncodingError("CVaR objective width does not match distribution");
    const Circuit ramp = cvar_objective_circuit(obj);
    EstimationProblem p;
    p.state_prep = compose(widen(load_distribution(d), ramp.num_qubits()), ramp);
    p.objective_qubit = obj.n;
    if (obj.mode == RampMode::Linearized) {
        p.post = {PostProcess::Kind::LinearInverse, obj.c, 0.0, 1.0, 1.0};
    }
    return p;
}

Circuit grover_operator(const EstimationProblem& p) {
    p.validate();
    const Circuit& a = p.state_prep;
    const int w = a.num_qubits();
    const int obj = p.objective_qubit;
    Circuit q(w);
    // S_chi = X Z X = -Z on the objective qubit.
    q.x(obj).z(obj).x(obj);
    q.append(inverse(a));
    // S_0 = I - 2|0><0| = X^n (MCZ) X^n, with MCZ = H MCX H on the top qubit.
    for (int i = 0; i < w; ++i) q.x(i);
    if (w == 1) {
        q.z(0);
    } else {
        q.h(w - 1);
        q.mcx(range(0, w - 1), w - 1);
        q.h(w - 1);
    }
    for (int i = 0; i < w; ++i) q.x(i);
    q.append(a);
    return q;
}

}  // namespace qrisk

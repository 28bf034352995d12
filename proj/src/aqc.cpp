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
#include <deque>
#include <limits>
#include <numbers>

#include "qrisk/compiler.hpp"
#include "qrisk/random.hpp"

namespace qrisk {

namespace {

using Mat = Eigen::MatrixXcd;
constexpr double kPi = std::numbers::pi;

struct Op {
    bool is_cx = false;
    GateKind axis = GateKind::RZ;
    int q = 0;  // rotation qubit, or CX target
    int c = 0;  // CX control
    std::size_t param = 0;
};

std::vector<Op> network_ops(const ParamNetwork& net) {
    std::vector<Op> ops;
    for (int q = 0; q < net.n; ++q) {
        ops.push_back({false, GateKind::RZ, q, 0, 3 * static_cast<std::size_t>(q)});
        ops.push_back({false, GateKind::RY, q, 0, 3 * static_cast<std::size_t>(q) + 1});
        ops.push_back({false, GateKind::RZ, q, 0, 3 * static_cast<std::size_t>(q) + 2});
    }
    std::size_t p = 3 * static_cast<std::size_t>(net.n);
    for (auto [c, t] : net.placements) {
        ops.push_back({true, GateKind::X, t, c, 0});
        ops.push_back({false, GateKind::RY, c, 0, p++});
        ops.push_back({false, GateKind::RZ, c, 0, p++});
        ops.push_back({false, GateKind::RY, t, 0, p++});
        ops.push_back({false, GateKind::RX, t, 0, p++});
    }
    return ops;
}

// Left-multiplies every column of `m` by a (controlled) single-qubit gate.
void apply_left(Mat& m, int n, const Matrix2& g, int target, std::uint64_t cmask) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const std::uint64_t low = tbit - 1;
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        cplx* a = m.data() + col * static_cast<Eigen::Index>(dim);
        for (std::uint64_t k = 0; k < dim / 2; ++k) {
            const std::uint64_t i = ((k & ~low) << 1) | (k & low);
            if ((i & cmask) != cmask) continue;
            const std::uint64_t j = i | tbit;
            const cplx u = a[i], v = a[j];
            a[i] = g[0] * u + g[1] * v;
            a[j] = g[2] * u + g[3] * v;
        }
    }
}

Matrix2 adjoint(const Matrix2& g) { return {std::conj(g[0]), std::conj(g[2]), std::conj(g[1]), std::conj(g[3])}; }

void apply_op(Mat& m, int n, const Op& op, const std::vector<double>& theta, bool dagger) {
    if (op.is_cx) {
        apply_left(m, n, gate_matrix(GateKind::X, 0), op.q, std::uint64_t{1} << op.c);
        return;
    }
    const Matrix2 g = gate_matrix(op.axis, theta[op.param]);
    apply_left(m, n, dagger ? adjoint(g) : g, op.q, 0);
}

// Tr(W^dagger sigma X) for a Pauli sigma on qubit q.
cplx pauli_overlap(const Mat& w, const Mat& x, int n, GateKind axis, int q) {
    using namespace std::complex_literals;
    const std::uint64_t dim = std::uint64_t{1} << n;
    const std::uint64_t tbit = std::uint64_t{1} << q;
    const std::uint64_t low = tbit - 1;
    cplx acc = 0.0;
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
        const cplx* wc = w.data() + col * static_cast<Eigen::Index>(dim);
        const cplx* xc = x.data() + col * static_cast<Eigen::Index>(dim);
        for (std::uint64_t k = 0; k < dim / 2; ++k) {
            const std::uint64_t i = ((k & ~low) << 1) | (k & low);
            const std::uint64_t j = i | tbit;
            cplx si, sj;  // rows i, j of sigma * x
            switch (axis) {
                case GateKind::RX: si = xc[j]; sj = xc[i]; break;
                case GateKind::RY: si = -1i * xc[j]; sj = 1i * xc[i]; break;
                default: si = xc[i]; sj = -xc[j]; break;
            }
            acc += std::conj(wc[i]) * si + std::conj(wc[j]) * sj;
        }
    }
    return acc;
}

cplx trace_inner(const Mat& v, const Mat& u) { return (v.conjugate().cwiseProduct(u)).sum(); }

void check_target(const Mat& u, int* n_out) {
    const Eigen::Index dim = u.rows();
    if (dim != u.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
        throw CompileError("target must be a square 2^n x 2^n matrix");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    const double err = (u.adjoint() * u - Mat::Identity(dim, dim)).norm();
    if (err > 1e-8) throw CompileError("target matrix is not unitary (||U^dagger U - I||_F = " + std::to_string(err) + ")");
    *n_out = n;
}

struct Lbfgs {
    int iterations = 0;
    double f = 0.0;
};

// Minimizes aqc_objective from net.theta in place.
Lbfgs minimize(ParamNetwork& net, const Mat& u, const AqcConfig& cfg) {
    const std::size_t np = net.num_params();
    std::vector<double> g(np), g_new(np), d(np), x_new(np);
    double f = aqc_objective(net, u, &g);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    Lbfgs out;
    int stall = 0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        out.iterations = it + 1;
        double gnorm = 0.0;
        for (double v : g) gnorm = std::max(gnorm, std::abs(v));
        if (gnorm < cfg.gradient_tolerance || f < 1e-18) break;
        // Two-loop recursion.
        std::vector<double> q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            double dot = 0.0;
            for (std::size_t i = 0; i < np; ++i) dot += s_hist[k][i] * q[i];
            alpha[k] = rho_hist[k] * dot;
            for (std::size_t i = 0; i < np; ++i) q[i] -= alpha[k] * y_hist[k][i];
        }
        double gamma = 1.0;
        if (!s_hist.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t i = 0; i < np; ++i) {
                sy += s_hist.back()[i] * y_hist.back()[i];
                yy += y_hist.back()[i] * y_hist.back()[i];
            }
            if (yy > 0) gamma = sy / yy;
        }
        for (double& v : q) v *= gamma;
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < np; ++i) dot += y_hist[k][i] * q[i];
            const double beta = rho_hist[k] * dot;
            for (std::size_t i = 0; i < np; ++i) q[i] += s_hist[k][i] * (alpha[k] - beta);
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            d[i] = -q[i];
            slope += d[i] * g[i];
        }
        if (!(slope < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            slope = 0.0;
            for (std::size_t i = 0; i < np; ++i) {
                d[i] = -g[i];
                slope -= g[i] * g[i];
            }
        }
        // Armijo backtracking.
        const std::vector<double> x = net.theta;
        double step = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < np; ++i) x_new[i] = x[i] + step * d[i];
            net.theta = x_new;
            f_new = aqc_objective(net, u, &g_new);
            if (f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            net.theta = x;
            if (s_hist.empty()) break;
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            continue;
        }
        std::vector<double> s(np), y(np);
        double sy = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
            sy += s[i] * y[i];
        }
        if (sy > 1e-300) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > cfg.lbfgs_memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        stall = (f - f_new) < 1e-16 * std::max(1.0, f) ? stall + 1 : 0;
        f = f_new;
        g = g_new;
        if (stall >= 20) break;
    }
    out.f = f;
    return out;
}

}  // namespace

ParamNetwork ParamNetwork::make(int n, int depth, Layout layout, Connectivity connectivity) {
    if (n < 1 || n > 12) throw CompileError("network width must be in 1..12");
    if (depth < 0) throw CompileError("network depth must be >= 0");
    ParamNetwork net;
    net.n = n;
    net.layout = layout;
    net.connectivity = connectivity;
    if (n >= 2) {
        std::vector<std::pair<int, int>> pairs;
        if (layout == Layout::Spin) {
            for (int parity = 0; parity < 2; ++parity) {
                for (int i = parity; i + 1 < n; i += 2) pairs.emplace_back(i, i + 1);
            }
        } else if (connectivity == Connectivity::Line) {
            for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
        } else {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
            }
        }
        for (int u = 0; u < depth; ++u) net.placements.push_back(pairs[u % pairs.size()]);
    }
    net.theta.assign(net.num_params(), 0.0);
    return net;
}

Circuit ParamNetwork::to_circuit() const {
    Circuit c(n);
    for (const Op& op : network_ops(*this)) {
        if (op.is_cx) {
            c.cx(op.c, op.q);
        } else {
            c.append(Instruction::gate(op.axis, op.q, theta[op.param]));
        }
    }
    return c;
}

Eigen::MatrixXcd network_unitary(const ParamNetwork& net) {
    if (net.theta.size() != net.num_params()) throw CompileError("theta length does not match network");
    const Eigen::Index dim = Eigen::Index{1} << net.n;
    Mat v = Mat::Identity(dim, dim);
    for (const Op& op : network_ops(net)) apply_op(v, net.n, op, net.theta, false);
    return v;
}

TraceValue network_trace(const ParamNetwork& net, const Eigen::MatrixXcd& u, bool with_gradient) {
    using namespace std::complex_literals;
    const auto ops = network_ops(net);
    Mat w = network_unitary(net);
    TraceValue out;
    out.trace = trace_inner(w, u);
    if (!with_gradient) return out;
    out.gradient.assign(net.num_params(), 0.0);
    Mat x = u;
    for (std::size_t k = ops.size(); k-- > 0;) {
        const Op& op = ops[k];
        if (!op.is_cx) out.gradient[op.param] = 0.5i * pauli_overlap(w, x, net.n, op.axis, op.q);
        apply_op(w, net.n, op, net.theta, true);
        apply_op(x, net.n, op, net.theta, true);
    }
    return out;
}

double aqc_objective(const ParamNetwork& net, const Eigen::MatrixXcd& u, std::vector<double>* grad) {
    const double norm = std::pow(4.0, net.n);
    const TraceValue tv = network_trace(net, u, grad != nullptr);
    if (grad) {
        grad->resize(tv.gradient.size());
        for (std::size_t i = 0; i < tv.gradient.size(); ++i) {
            (*grad)[i] = -2.0 * std::real(std::conj(tv.trace) * tv.gradient[i]) / norm;
        }
    }
    return 1.0 - std::norm(tv.trace) / norm;
}

double phase_aligned_distance(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& u) {
    const cplx t = trace_inner(v, u);
    const cplx phase = std::abs(t) > 0 ? std::conj(t) / std::abs(t) : cplx{1.0, 0.0};
    return (v - phase * u).norm();
}

void AqcConfig::validate() const {
    if (depth < 1) throw CompileError("AQC depth must be >= 1");
    if (!(gradient_tolerance > 0)) throw CompileError("gradient tolerance must be > 0");
    if (restarts < 1) throw CompileError("restarts must be >= 1");
    if (max_iterations < 1) throw CompileError("max_iterations must be >= 1");
    if (lbfgs_memory < 1) throw CompileError("L-BFGS memory must be >= 1");
}

AqcResult aqc_compile(const Eigen::MatrixXcd& u, const AqcConfig& cfg) {
    cfg.validate();
    int n = 0;
    check_target(u, &n);
    if (n > 10) throw CompileError("AQC supports at most 10 qubits");
    const ParamNetwork shape = ParamNetwork::make(n, cfg.depth, cfg.layout, cfg.connectivity);
    if (cfg.initial_theta && cfg.initial_theta->size() != shape.num_params()) {
        throw CompileError("initial theta has " + std::to_string(cfg.initial_theta->size()) +
                           " entries, network needs " + std::to_string(shape.num_params()));
    }
    AqcResult best;
    double best_f = std::numeric_limits<double>::infinity();
    int used = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        ParamNetwork net = shape;
        if (r == 0 && cfg.initial_theta) {
            net.theta = *cfg.initial_theta;
        } else {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            for (double& t : net.theta) t = 2 * kPi * rng.uniform();
        }
        const Lbfgs run = minimize(net, u, cfg);
        ++used;
        if (run.f < best_f) {
            best_f = run.f;
            best.network = net;
        }
        const double dist = phase_aligned_distance(network_unitary(best.network), u);
        if (dist <= cfg.target_distance) break;
    }
    const Mat v = network_unitary(best.network);
    const cplx t = trace_inner(v, u);
    const double dim = static_cast<double>(u.rows());
    best.circuit = best.network.to_circuit();
    best.report.distance = phase_aligned_distance(v, u);
    best.report.fidelity = std::abs(t) / dim;
    best.report.converged = best.report.distance <= cfg.target_distance;
    best.report.restarts_used = used;
    best.report.after = metrics(best.circuit);
    // ||V - e^{i phi} U||^2 = 2 * 2^n - 2 |Tr(V^dagger U)| at the optimal phase.
    const double identity_gap = std::abs(best.report.distance * best.report.distance - (2 * dim - 2 * std::abs(t)));
    if (identity_gap > 1e-10 * std::max(1.0, dim)) {
        throw CompileError("internal: distance/trace identity violated by " + std::to_string(identity_gap));
    }
    return best;
}

}  // namespace qrisk

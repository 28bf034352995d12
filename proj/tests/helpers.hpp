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
#include <cmath>
#include <numbers>
#include <vector>

#include "qrisk/circuit.hpp"
#include "qrisk/encoding.hpp"
#include "qrisk/random.hpp"

namespace qrisk::testing {

inline constexpr double kPi = std::numbers::pi;

// max |U - e^{i phi} V| with phi read off the largest entry of V^dagger-aligned U.
inline double distance_up_to_phase(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
    Eigen::Index r = 0, c = 0;
    v.cwiseAbs().maxCoeff(&r, &c);
    const std::complex<double> ph = u(r, c) / v(r, c);
    return (u - (ph / std::abs(ph)) * v).cwiseAbs().maxCoeff();
}

inline Circuit random_circuit(int n, int gates, Rng& rng, bool multi_controls = true) {
    Circuit c(n);
    const GateKind kinds[] = {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H,
                              GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::PHASE};
    for (int g = 0; g < gates; ++g) {
        const GateKind kind = kinds[rng.below(8)];
        const int max_ctrl = multi_controls ? std::min(n - 1, 3) : std::min(n - 1, 1);
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_ctrl) + 1));
        std::vector<int> qs(n);
        for (int i = 0; i < n; ++i) qs[i] = i;
        for (int i = n - 1; i > 0; --i) std::swap(qs[i], qs[rng.below(static_cast<std::uint64_t>(i) + 1)]);
        std::vector<int> ctrl(qs.begin(), qs.begin() + k);
        Instruction inst = Instruction::controlled_gate(kind, ctrl, qs[k]);
        if (inst.has_param()) inst.theta = (rng.uniform() * 2 - 1) * 2 * kPi;
        c.append(std::move(inst));
    }
    return c;
}

inline Circuit random_cx_circuit(int n, int gates, Rng& rng) {
    Circuit c(n);
    for (int g = 0; g < gates; ++g) {
        const int a = static_cast<int>(rng.below(n));
        int b = static_cast<int>(rng.below(n - 1));
        if (b >= a) ++b;
        if (rng.uniform() < 0.5) {
            c.cx(a, b);
        } else {
            c.rz(a, rng.uniform() * 2 * kPi).h(b);
        }
    }
    return c;
}

inline DiscreteDistribution random_distribution(int n, Rng& rng, double zero_fraction = 0.0) {
    std::vector<double> p(std::size_t{1} << n);
    double s = 0.0;
    for (double& v : p) {
        v = rng.uniform() < zero_fraction ? 0.0 : -std::log(1.0 - rng.uniform());
        s += v;
    }
    if (s == 0.0) {
        p[0] = 1.0;
        s = 1.0;
    }
    for (double& v : p) v /= s;
    return DiscreteDistribution(p);
}

}  // namespace qrisk::testing

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

#include "doctest.h"
#include "helpers.hpp"
#include "qrisk/simulator.hpp"

using namespace qrisk;
using namespace qrisk::testing;

TEST_CASE("basic unitaries") {
    Circuit h(1);
    h.h(0);
    Eigen::Matrix2cd expected;
    expected << 1, 1, 1, -1;
    expected /= std::sqrt(2.0);
    CHECK((unitary_of(h) - expected).norm() < 1e-15);

    // Control on qubit 1: |10> <-> |11> in |q1 q0> notation.
    Circuit cx(2);
    cx.cx(1, 0);
    const auto u = unitary_of(cx);
    Eigen::Matrix4cd perm = Eigen::Matrix4cd::Zero();
    perm(0, 0) = perm(1, 1) = perm(3, 2) = perm(2, 3) = 1;
    CHECK((u - perm).norm() < 1e-15);
}

TEST_CASE("norm is preserved after every instruction") {
    Rng rng(8);
    const Circuit c = random_circuit(4, 60, rng);
    StateVector sv(4);
    for (const auto& inst : c) {
        sv.apply(inst);
        CHECK(std::abs(sv.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("unitary_of is unitary and rejects measurements") {
    Rng rng(1);
    const auto u = unitary_of(random_circuit(4, 40, rng));
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(16, 16)).norm() < 1e-9);
    Circuit m(1, 1);
    m.measure(0, 0);
    CHECK_THROWS_AS(unitary_of(m), SimulationError);
    CHECK_THROWS_AS(probability_of_one(m, 0), SimulationError);
}

TEST_CASE("probability_of_one") {
    Circuit x(1);
    x.x(0);
    CHECK(probability_of_one(x, 0) == doctest::Approx(1.0).epsilon(1e-15));
    Circuit h(1);
    h.h(0);
    CHECK(probability_of_one(h, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("H then measure") {
    Circuit c(1, 1);
    c.h(0).measure(0, 0);
    const auto dist = enumerate_trajectories(c);
    CHECK(dist.at("0") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dist.at("1") == doctest::Approx(0.5).epsilon(1e-15));
    const ShotCounts counts = run_shots(c, 5000, 42);
    CHECK(counts.shots == 5000);
    const double sigma = std::sqrt(5000 * 0.25);
    CHECK(std::abs(static_cast<double>(counts.counts.at("0")) - 2500.0) < 5 * sigma);
}

TEST_CASE("reset returns the qubit to zero") {
    Circuit c(1, 1);
    c.x(0).reset(0).measure(0, 0);
    const ShotCounts counts = run_shots(c, 200, 1);
    CHECK(counts.counts.size() == 1);
    CHECK(counts.counts.at("0") == 200);
    Circuit h(1, 1);
    h.h(0).reset(0).measure(0, 0);
    CHECK(enumerate_trajectories(h).at("0") == doctest::Approx(1.0));
}

TEST_CASE("Bell pair measured twice") {
    Circuit c(2, 4);
    c.h(0).cx(0, 1).measure(0, 0).measure(1, 1).measure(0, 2).measure(1, 3);
    const ShotCounts counts = run_shots(c, 1000, 3);
    for (const auto& [k, n] : counts.counts) CHECK((k == "0000" || k == "1111"));
    const auto dist = enumerate_trajectories(c);
    CHECK(dist.size() == 2);
}

TEST_CASE("keys put classical bit 0 on the right") {
    Circuit c(2, 2);
    c.x(0).measure(0, 0).measure(1, 1);
    CHECK(run_shots(c, 3, 0).counts.at("01") == 3);
    CHECK(format_bits(0b01, 2) == "01");
    CHECK(parse_bits("10") == 2);
}

TEST_CASE("reading an unwritten classical bit is an error") {
    Circuit c(1, 1);
    Instruction x = Instruction::gate(GateKind::X, 0);
    x.condition = Condition{0, 1};
    c.append(x);
    CHECK_THROWS_AS(run_shots(c, 1, 0), SimulationError);
    CHECK_THROWS_AS(enumerate_trajectories(c), SimulationError);
}

TEST_CASE("measure then conditioned X equals the deferred CX circuit") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        const double a = rng.uniform() * kPi, b = rng.uniform() * kPi;
        Circuit dyn(2, 2);
        dyn.ry(0, a).ry(1, b).measure(0, 0);
        Instruction x = Instruction::gate(GateKind::X, 1);
        x.condition = Condition{0, 1};
        dyn.append(x).measure(1, 1);
        Circuit deferred(2);
        deferred.ry(0, a).ry(1, b).cx(0, 1);
        const auto sv = simulate(deferred);
        const auto dist = enumerate_trajectories(dyn);
        for (int i = 0; i < 4; ++i) {
            const auto it = dist.find(format_bits(i, 2));
            const double p = it == dist.end() ? 0.0 : it->second;
            CHECK(std::abs(p - std::norm(sv.amplitudes()[i])) < 1e-12);
        }
    }
}

TEST_CASE("shot frequencies converge to exact probabilities") {
    Rng rng(23);
    for (int t = 0; t < 5; ++t) {
        Circuit c = random_circuit(3, 25, rng);
        Circuit m(3, 3);
        m.append(c);
        m.measure(0, 0).measure(1, 1);
        m.h(2).measure(2, 2);
        const std::uint64_t shots = 4000;
        const double delta = 1e-3;
        const double bound = 5 * std::sqrt(std::log(2 / delta) / 2 / static_cast<double>(shots));
        CHECK(total_variation(run_shots(m, shots, 100 + t), enumerate_trajectories(m)) <= bound);
    }
}

TEST_CASE("terminal sampling matches Born probabilities") {
    Rng rng(29);
    const Circuit c = random_circuit(3, 30, rng);
    Circuit m(3, 3);
    m.append(c);
    for (int q = 0; q < 3; ++q) m.measure(q, q);
    const Eigen::VectorXcd col = unitary_of(c).col(0);
    OutcomeDistribution born;
    for (int i = 0; i < 8; ++i) born[format_bits(i, 3)] = std::norm(col(i));
    const std::uint64_t shots = 5000;
    const double bound = 5 * std::sqrt(std::log(2 / 1e-3) / 2 / static_cast<double>(shots));
    CHECK(total_variation(run_shots(m, shots, 5), born) <= bound);
    const auto exact = enumerate_trajectories(m);
    for (const auto& [k, p] : born) {
        const double e = exact.count(k) ? exact.at(k) : 0.0;
        CHECK(std::abs(e - p) < 1e-12);
    }
}

TEST_CASE("shot runs are deterministic under a seed") {
    Circuit c(2, 2);
    c.h(0).ry(1, 0.7).measure(0, 0).cx(0, 1).measure(1, 1);
    CHECK(run_shots(c, 500, 9).counts == run_shots(c, 500, 9).counts);
    CHECK(run_shots(c, 500, 9).counts != run_shots(c, 500, 10).counts);
    // A zero-probability channel consumes no randomness, so it matches the noiseless run.
    CHECK(run_shots(c, 500, 9, NoiseSpec{}).counts == run_shots(c, 500, 9).counts);
}

TEST_CASE("Pauli noise after CX is sampled per trajectory") {
    Circuit c(2, 2);
    c.cx(0, 1).measure(0, 0).measure(1, 1);
    NoiseSpec only_x_on_target;
    only_x_on_target.pauli_probs[4 - 1] = 1.0;  // index 4: I on control, X on target
    const ShotCounts flipped = run_shots(c, 100, 2, only_x_on_target);
    CHECK(flipped.counts.at("10") == 100);
    const ShotCounts noisy = run_shots(c, 4000, 2, NoiseSpec::depolarizing(0.3));
    const double p00 = static_cast<double>(noisy.counts.at("00")) / 4000.0;
    // X or Y on either qubit disturbs |00>: 12 of the 15 Paulis flip at least one bit.
    CHECK(p00 == doctest::Approx(1.0 - 0.3 * 12.0 / 15.0).epsilon(0.05));
    CHECK(run_shots(c, 300, 4, NoiseSpec::depolarizing(0.3)).counts ==
          run_shots(c, 300, 4, NoiseSpec::depolarizing(0.3)).counts);
    NoiseSpec bad;
    bad.pauli_probs[0] = 0.7;
    bad.pauli_probs[1] = 0.7;
    CHECK_THROWS_AS(run_shots(c, 1, 0, bad), SimulationError);
}

TEST_CASE("coherent over-rotation is a ZX rotation after each CX") {
    Circuit c(2, 2);
    c.x(0).cx(0, 1).measure(0, 0).measure(1, 1);
    const double eps = 0.4;
    const ShotCounts counts = run_shots(c, 4000, 6, NoiseSpec::coherent(eps));
    // Control is 1, so the extra rotation is Rx(eps) on the target: P(target flips back) = sin^2(eps/2).
    const double p01 = counts.counts.count("01") ? static_cast<double>(counts.counts.at("01")) / 4000.0 : 0.0;
    CHECK(p01 == doctest::Approx(std::pow(std::sin(eps / 2), 2)).epsilon(0.25));
}

TEST_CASE("trajectory budget") {
    Circuit c(1, 21);
    for (int i = 0; i < 21; ++i) c.measure(0, i);
    CHECK_THROWS_AS(enumerate_trajectories(c), SimulationError);
    CHECK_THROWS_AS(run_shots(c, 0, 0), SimulationError);
}

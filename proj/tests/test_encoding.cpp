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

#include "doctest.h"
#include "helpers.hpp"
#include "qrisk/encoding.hpp"
#include "qrisk/estimation.hpp"
#include "qrisk/simulator.hpp"

using namespace qrisk;
using namespace qrisk::testing;

namespace {

double objective_probability(double c, double f) {
    return std::pow(std::sin(kPi / 4 + c * (f - 0.5)), 2);
}

EstimationProblem single_qubit_problem(double a) {
    EstimationProblem p;
    p.state_prep = Circuit(1);
    p.state_prep.ry(0, 2 * std::asin(std::sqrt(a)));
    p.objective_qubit = 0;
    return p;
}

// Eigenphases in [0, 1) of U that carry weight in the expansion of psi.
std::vector<double> phases_seen_by(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& psi) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
    std::vector<double> out;
    const Eigen::VectorXcd coeffs = es.eigenvectors().colPivHouseholderQr().solve(psi);
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
        if (std::abs(coeffs(k)) < 1e-6) continue;
        double ph = std::arg(es.eigenvalues()(k)) / (2 * kPi);
        if (ph < 0) ph += 1.0;
        out.push_back(ph);
    }
    return out;
}

Eigen::VectorXcd initial_state(const Circuit& a) { return unitary_of(a).col(0); }

}  // namespace

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.3, 0.2}), EncodingError);
    CHECK_THROWS_AS(DiscreteDistribution({1.2, -0.2}), EncodingError);
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 0.0}), EncodingError);
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.6}), EncodingError);
    const DiscreteDistribution d({0.25, 0.25, 0.25, 0.25});
    CHECK(d.num_qubits() == 2);
}

TEST_CASE("distribution CSV round trip") {
    Rng rng(4);
    const DiscreteDistribution d = random_distribution(3, rng);
    const DiscreteDistribution back = read_distribution_csv(write_distribution_csv(d));
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(back.probs[i] - d.probs[i]) < 1e-15);
    CHECK(read_distribution_csv("index,probability\n1,0.75\n0,0.25\n").probs[1] == 0.75);
    CHECK_THROWS_AS(read_distribution_csv("index,probability\n0,0.5\n0,0.5\n"), EncodingError);
    CHECK_THROWS_AS(read_distribution_csv("index,probability\n0,abc\n1,0.5\n"), EncodingError);
}

TEST_CASE("loader examples") {
    const auto sv = simulate(load_distribution(DiscreteDistribution({0.1, 0.2, 0.3, 0.4})));
    const double expected[] = {0.1, 0.2, 0.3, 0.4};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(sv.amplitudes()[i] - std::sqrt(expected[i])) < 1e-12);
    }
    const auto point = simulate(load_distribution(DiscreteDistribution({0, 0, 0, 1})));
    CHECK(std::abs(point.amplitudes()[3] - 1.0) < 1e-12);
}

TEST_CASE("loader round trip on random distributions") {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 5;
        const DiscreteDistribution d = random_distribution(n, rng, t % 3 == 0 ? 0.4 : 0.0);
        const auto sv = simulate(load_distribution(d));
        double worst = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            worst = std::max(worst, std::abs(std::norm(sv.amplitudes()[i]) - d.probs[i]));
            CHECK(std::abs(sv.amplitudes()[i].imag()) < 1e-12);
            CHECK(sv.amplitudes()[i].real() > -1e-12);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("loader root angle splits on the most significant bit") {
    Rng rng(2);
    const DiscreteDistribution d = random_distribution(3, rng);
    const auto angles = loader_angles(d);
    REQUIRE(angles.size() == 3);
    CHECK(angles[0].size() == 1);
    CHECK(angles[2].size() == 4);
    const double low = d.probs[0] + d.probs[1] + d.probs[2] + d.probs[3];
    CHECK(angles[0][0] == doctest::Approx(2 * std::acos(std::sqrt(low))).epsilon(1e-12));
    // Prefix 1 on the top bit, then split on the middle bit.
    const double p1 = d.probs[4] + d.probs[5] + d.probs[6] + d.probs[7];
    CHECK(angles[1][1] == doctest::Approx(2 * std::acos(std::sqrt((d.probs[4] + d.probs[5]) / p1))).epsilon(1e-12));
    const auto zero = loader_angles(DiscreteDistribution({1, 0, 0, 0}));
    CHECK(zero[1][1] == 0.0);
}

TEST_CASE("multiplexed Ry applies the selected rotation per control pattern") {
    Rng rng(6);
    for (int k = 0; k <= 3; ++k) {
        std::vector<double> angles(std::size_t{1} << k);
        for (double& a : angles) a = (rng.uniform() - 0.5) * 4 * kPi;
        std::vector<int> controls;
        for (int b = 0; b < k; ++b) controls.push_back(b + 1);
        Circuit c(k + 1);
        append_multiplexed_ry(c, controls, 0, angles);
        const auto u = unitary_of(c);
        for (std::size_t v = 0; v < angles.size(); ++v) {
            const Eigen::Index base = static_cast<Eigen::Index>(v << 1);
            const double h = angles[v] / 2;
            CHECK(std::abs(u(base, base) - std::cos(h)) < 1e-12);
            CHECK(std::abs(u(base + 1, base) - std::sin(h)) < 1e-12);
            CHECK(std::abs(u(base, base + 1) + std::sin(h)) < 1e-12);
            CHECK(std::abs(u(base + 1, base + 1) - std::cos(h)) < 1e-12);
        }
    }
}

TEST_CASE("linear objective examples") {
    {
        LinearObjective half{0.5, 0.0, 0.7, 2};
        const Circuit c = linear_objective_circuit(half);
        for (int i = 0; i < 4; ++i) {
            Circuit in(3);
            for (int b = 0; b < 2; ++b) if (i >> b & 1) in.x(b);
            CHECK(probability_of_one(compose(in, c), 2) == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    {
        LinearObjective id{0.0, 1.0, 0.5, 1};
        const Circuit c = linear_objective_circuit(id);
        CHECK(probability_of_one(c, 1) == doctest::Approx(std::pow(std::sin(kPi / 4 - 0.25), 2)).epsilon(1e-12));
        Circuit one(2);
        one.x(0);
        CHECK(probability_of_one(compose(one, c), 1) ==
              doctest::Approx(std::pow(std::sin(kPi / 4 + 0.25), 2)).epsilon(1e-12));
    }
    {
        const DiscreteDistribution d({0.25, 0.25, 0.25, 0.25});
        const EstimationProblem p = expectation_problem(d, 0.1);
        double expected = 0.0;
        for (int i = 0; i < 4; ++i) expected += 0.25 * objective_probability(0.1, i / 3.0);
        CHECK(std::abs(probability_of_one(p.state_prep, p.objective_qubit) - expected) < 1e-12);
    }
    CHECK_THROWS_AS(linear_objective_circuit({0.0, 1.0, 0.5, 2}), EncodingError);
    CHECK_THROWS_AS(linear_objective_circuit({0.0, 0.1, 0.0, 2}), EncodingError);
}

TEST_CASE("loader plus objective reproduces the analytic amplitude") {
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 4;
        const DiscreteDistribution d = random_distribution(n, rng);
        const double c = 0.05 + rng.uniform() * 0.9;
        const EstimationProblem p = expectation_problem(d, c);
        double expected = 0.0;
        const double last = static_cast<double>(d.size() - 1);
        for (std::size_t i = 0; i < d.size(); ++i) expected += d.probs[i] * objective_probability(c, i / last);
        CHECK(std::abs(probability_of_one(p.state_prep, p.objective_qubit) - expected) < 1e-12);
    }
}

TEST_CASE("linear post-processing bias shrinks with c squared") {
    Rng rng(8);
    const DiscreteDistribution d = random_distribution(3, rng);
    double mean = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) mean += d.probs[i] * static_cast<double>(i);
    double prev = 1e9;
    for (double c : {0.5, 0.25, 0.1, 0.05}) {
        const EstimationProblem p = expectation_problem(d, c);
        const double a = probability_of_one(p.state_prep, p.objective_qubit);
        const double est = post_process(a, p.post);
        const double err_f = std::abs(est - mean) / 7.0;
        CHECK(err_f <= linearization_bias_bound(c, 0.5) + 1e-12);
        CHECK(err_f < prev);
        if (prev < 1e8) CHECK(err_f <= prev * 0.3);  // at least quadratic when c halves or better
        prev = err_f;
    }
}

TEST_CASE("comparator flips on the right basis states in both modes") {
    for (int n = 1; n <= 4; ++n) {
        const long long N = 1LL << n;
        for (long long l = 0; l < N; ++l) {
            for (auto dir : {CompareDirection::LE, CompareDirection::GE}) {
                const ComparatorSpec spec{l, dir};
                for (auto mode : {ComparatorMode::Oracle, ComparatorMode::Decomposed}) {
                    const Circuit c = comparator_circuit(spec, n, mode);
                    CHECK(c.num_qubits() == comparator_width(n, mode));
                    const auto u = unitary_of(c);
                    for (long long i = 0; i < N; ++i) {
                        const bool hit = dir == CompareDirection::LE ? i <= l : i >= l;
                        const Eigen::Index out = i | (hit ? (1LL << n) : 0);
                        CHECK(std::abs(std::abs(u(out, i)) - 1.0) < 1e-10);
                    }
                }
            }
        }
    }
    CHECK_THROWS_AS(comparator_circuit({4, CompareDirection::LE}, 2), EncodingError);
    CHECK_THROWS_AS(comparator_circuit({-1, CompareDirection::GE}, 2), EncodingError);
}

TEST_CASE("comparator examples") {
    const DiscreteDistribution d({0.1, 0.2, 0.3, 0.4});
    CHECK(probability_of_one(cdf_problem(d, 1).state_prep, 2) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(probability_of_one(cdf_problem(d, 3).state_prep, 2) == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const DiscreteDistribution r = random_distribution(3, rng);
        const long long l = 1 + static_cast<long long>(rng.below(7));
        const Circuit ge = compose(widen(load_distribution(r), 4), comparator_circuit({l, CompareDirection::GE}, 3));
        const double a_ge = probability_of_one(ge, 3);
        const double a_le = probability_of_one(cdf_problem(r, l - 1).state_prep, 3);
        CHECK(std::abs(a_ge - (1 - a_le)) < 1e-12);
        const double a_dec = probability_of_one(cdf_problem(r, l - 1, ComparatorMode::Decomposed).state_prep, 3);
        CHECK(std::abs(a_dec - a_le) < 1e-12);
    }
}

TEST_CASE("CVaR objective") {
    const DiscreteDistribution uniform({0.25, 0.25, 0.25, 0.25});
    CvarObjective lower{2, Tail::Lower, 2};
    CHECK(probability_of_one(cvar_problem(uniform, lower).state_prep, 2) == doctest::Approx(0.375).epsilon(1e-12));
    CvarObjective point{1, Tail::Lower, 2};
    CHECK(probability_of_one(cvar_problem(DiscreteDistribution({0, 1, 0, 0}), point).state_prep, 2) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(cvar_objective_circuit({0, Tail::Lower, 2}), EncodingError);

    Rng rng(10);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + t % 3;
        const DiscreteDistribution d = random_distribution(n, rng);
        const long long N = 1LL << n;
        const long long l = static_cast<long long>(rng.below(N));
        double expected = 0.0;
        for (long long i = l; i < N - 1; ++i)
            expected += d.probs[i] * static_cast<double>(i - l) / static_cast<double>(N - 1 - l);
        if (l < N - 1) expected += d.probs[N - 1];
        const CvarObjective upper{l, Tail::Upper, n};
        CHECK(std::abs(probability_of_one(cvar_problem(d, upper).state_prep, n) - expected) < 1e-12);

        CvarObjective lin = upper;
        lin.mode = RampMode::Linearized;
        lin.c = 0.3;
        for (auto cmp : {ComparatorMode::Oracle, ComparatorMode::Decomposed}) {
            lin.comparator = cmp;
            const Circuit c = cvar_objective_circuit(lin);
            CHECK(c.num_qubits() == cvar_objective_width(lin));
            const auto u = unitary_of(c);
            for (long long i = 0; i < N; ++i) {
                const double p1 = std::norm(u(i | N, i));
                const double g = l == N - 1 ? 0.0 : static_cast<double>(i - l) / static_cast<double>(N - 1 - l);
                const double want = i >= l ? objective_probability(0.3, g) : 0.0;
                CHECK(std::abs(p1 - want) < 1e-10);
                CHECK(std::abs(std::norm(u(i, i)) + p1 - 1.0) < 1e-10);  // work qubits restored
            }
        }
    }
}

TEST_CASE("Grover eigenphases") {
    const auto check = [](const EstimationProblem& p, double a) {
        const auto phases = phases_seen_by(unitary_of(grover_operator(p)), initial_state(p.state_prep));
        REQUIRE(!phases.empty());
        for (double ph : phases) CHECK(std::abs(std::pow(std::sin(kPi * ph), 2) - a) < 1e-9);
        return phases;
    };
    auto half = check(single_qubit_problem(0.5), 0.5);
    for (double ph : half) CHECK((std::abs(ph - 0.25) < 1e-9 || std::abs(ph - 0.75) < 1e-9));
    auto quarter = check(single_qubit_problem(0.25), 0.25);
    for (double ph : quarter) CHECK((std::abs(ph - 1.0 / 6) < 1e-9 || std::abs(ph - 5.0 / 6) < 1e-9));
    auto one = check(single_qubit_problem(1.0), 1.0);
    for (double ph : one) CHECK(std::abs(ph - 0.5) < 1e-9);

    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 3;
        const DiscreteDistribution d = random_distribution(n, rng);
        const EstimationProblem p = t % 2 ? expectation_problem(d, 0.25)
                                          : cdf_problem(d, static_cast<long long>(rng.below(d.size())));
        check(p, probability_of_one(p.state_prep, p.objective_qubit));
    }
}

TEST_CASE("Grover power doubles eigenphases and controlled Q is block diagonal") {
    const EstimationProblem p = single_qubit_problem(0.5);
    const Circuit q = grover_operator(p);
    const auto phases = phases_seen_by(unitary_of(power(q, 2)), initial_state(p.state_prep));
    for (double ph : phases) CHECK(std::abs(ph - 0.5) < 1e-9);
    const auto uq = unitary_of(q);
    const auto cq = unitary_of(controlled(q));
    CHECK((cq.topLeftCorner(2, 2) - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
    CHECK((cq.bottomRightCorner(2, 2) - uq).norm() < 1e-12);
    CHECK(cq.topRightCorner(2, 2).norm() < 1e-12);
}

TEST_CASE("problem validation") {
    EstimationProblem p;
    p.state_prep = Circuit(2);
    p.objective_qubit = 2;
    CHECK_THROWS_AS(p.validate(), EncodingError);
    p.objective_qubit = 0;
    p.state_prep.measure(0, 0);
    CHECK_THROWS_AS(grover_operator(p), EncodingError);
}

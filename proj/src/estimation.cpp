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

#include "qrisk/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "qrisk/random.hpp"

namespace qrisk {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> identity_map(int n) {
    std::vector<int> map(n);
    for (int i = 0; i < n; ++i) map[i] = i;
    return map;
}

void check_budget(int width, const PrecisionConfig& cfg) {
    if (width > cfg.max_qubits) {
        throw EstimationError("circuit needs " + std::to_string(width) + " qubits, budget is " +
                              std::to_string(cfg.max_qubits));
    }
}

// Canonical-y histogram -> estimate. Ties go to the smaller y.
void finish_phase_estimate(AmplitudeEstimate& est, const std::map<long long, double>& raw, int m) {
    for (const auto& [y, p] : raw) est.outcome_probs[canonical_outcome(y, m)] += p;
    long long best = -1;
    double best_p = -1.0;
    for (const auto& [y, p] : est.outcome_probs) {
        if (p > best_p + 1e-12) {
            best = y;
            best_p = p;
        }
    }
    est.raw_outcome = best;
    est.a_hat = amplitude_from_outcome(best, m);
}

std::map<long long, double> outcomes_of(const Circuit& c, const PrecisionConfig& cfg) {
    std::map<long long, double> raw;
    if (cfg.mode == ExecMode::Exact) {
        for (const auto& [key, p] : enumerate_trajectories(c)) raw[static_cast<long long>(parse_bits(key))] += p;
    } else {
        const ShotCounts counts = run_shots(c, cfg.shots, cfg.seed);
        for (const auto& [key, n] : counts.counts) {
            raw[static_cast<long long>(parse_bits(key))] += static_cast<double>(n) / static_cast<double>(counts.shots);
        }
    }
    return raw;
}

std::pair<double, double> chernoff(double value, double shots, int max_rounds, double alpha) {
    const double eps = std::sqrt(3.0 * std::log(2.0 * max_rounds / alpha) / shots);
    return {std::max(0.0, value - eps), std::min(1.0, value + eps)};
}

// Largest admissible Grover power whose scaled theta-interval stays in one half-plane.
std::pair<int, bool> find_next_k(int k, bool upper, double theta_l, double theta_u, double min_ratio) {
    const double old_scaling = 4.0 * k + 2.0;
    const double width = theta_u - theta_l;
    long long max_scaling = width > 0 ? static_cast<long long>(1.0 / (2.0 * width)) : (1LL << 40);
    max_scaling = std::min(max_scaling, 1LL << 40);
    long long scaling = max_scaling - ((max_scaling - 2) % 4 + 4) % 4;
    while (static_cast<double>(scaling) >= min_ratio * old_scaling) {
        const double s = static_cast<double>(scaling);
        const double tmin = s * theta_l - std::floor(s * theta_l);
        const double tmax = s * theta_u - std::floor(s * theta_u);
        if (tmin <= tmax && tmax <= 0.5 && tmin <= 0.5) return {static_cast<int>((scaling - 2) / 4), true};
        if (tmax >= 0.5 && tmax >= tmin && tmin >= 0.5) return {static_cast<int>((scaling - 2) / 4), false};
        scaling -= 4;
    }
    return {k, upper};
}

}  // namespace

void PrecisionConfig::validate() const {
    if (m < 1 || m > 16) throw EstimationError("m must be in 1..16");
    if (!(epsilon > 0.0) || !(epsilon < 0.5)) throw EstimationError("epsilon must be in (0, 1/2)");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw EstimationError("alpha must be in (0, 1)");
    if (shots < 1) throw EstimationError("shots must be >= 1");
    if (max_rounds < 0) throw EstimationError("max_rounds must be >= 0");
}

Circuit qft(int m) {
    if (m < 1) throw EstimationError("QFT needs at least one qubit");
    Circuit c(m);
    for (int j = m - 1; j >= 0; --j) {
        c.h(j);
        for (int k = j - 1; k >= 0; --k) c.cphase(k, j, kPi / static_cast<double>(1LL << (j - k)));
    }
    for (int i = 0; i < m / 2; ++i) {
        const int a = i, b = m - 1 - i;
        c.cx(a, b).cx(b, a).cx(a, b);
    }
    return c;
}

double amplitude_from_outcome(long long y, int m) {
    const double s = std::sin(kPi * static_cast<double>(y) / static_cast<double>(1LL << m));
    return s * s;
}

long long canonical_outcome(long long y, int m) {
    const long long big = 1LL << m;
    y = ((y % big) + big) % big;
    return std::min(y, (big - y) % big);
}

Circuit qae_circuit(const EstimationProblem& p, int m) {
    p.validate();
    if (m < 1) throw EstimationError("m must be >= 1");
    const int na = p.state_prep.num_qubits();
    const int width = na + m;
    const Circuit q = grover_operator(p);
    const auto sys = identity_map(na);
    Circuit c(width, m);
    c.append(widen(p.state_prep, width));
    for (int j = 0; j < m; ++j) c.h(na + j);
    for (int j = 0; j < m; ++j) {
        const Circuit cq = controlled_on(q, na + j, sys, width);
        for (long long r = 0; r < (1LL << j); ++r) c.append(cq);
    }
    std::vector<int> evals(m);
    for (int j = 0; j < m; ++j) evals[j] = na + j;
    Circuit iqft = remap(inverse(qft(m)), evals, width);
    c.append(iqft);
    for (int j = 0; j < m; ++j) c.measure(na + j, j);
    return c;
}

Circuit dpe_circuit(const Circuit& unitary, const Circuit& eigenstate_prep, int m) {
    if (m < 1) throw EstimationError("m must be >= 1");
    if (!unitary.is_pure()) throw EstimationError("phase-estimated block must be pure");
    if (eigenstate_prep.num_qubits() != unitary.num_qubits()) {
        throw EstimationError("eigenstate preparation width does not match the unitary");
    }
    const int n = unitary.num_qubits();
    const int e = n;
    const int width = n + 1;
    const auto sys = identity_map(n);
    const Circuit cu = controlled_on(unitary, e, sys, width);
    Circuit c(width, m);
    c.append(widen(eigenstate_prep, width));
    for (int r = 1; r <= m; ++r) {
        c.h(e);
        for (long long k = 0; k < (1LL << (m - r)); ++k) c.append(cu);
        for (int j = 1; j < r; ++j) {
            Instruction corr = Instruction::gate(GateKind::PHASE, e, -kPi / static_cast<double>(1LL << j));
            corr.condition = Condition{r - 1 - j, 1};
            c.append(corr);
        }
        c.h(e);
        c.measure(e, r - 1);
        if (r < m) c.reset(e);
    }
    return c;
}

Circuit dae_circuit(const EstimationProblem& p, int m) {
    p.validate();
    return dpe_circuit(grover_operator(p), p.state_prep, m);
}

AmplitudeEstimate qae_canonical(const EstimationProblem& p, const PrecisionConfig& cfg) {
    cfg.validate();
    check_budget(p.state_prep.num_qubits() + cfg.m, cfg);
    const Circuit c = qae_circuit(p, cfg.m);
    AmplitudeEstimate est;
    est.method = "QAE";
    est.circuit_width = c.num_qubits();
    est.circuits_submitted = 1;
    est.iterations = cfg.m;
    est.iterations_kind = "oracle powers";
    est.oracle_queries = (1ULL << cfg.m) - 1;
    finish_phase_estimate(est, outcomes_of(c, cfg), cfg.m);
    return est;
}

AmplitudeEstimate dae(const EstimationProblem& p, const PrecisionConfig& cfg) {
    cfg.validate();
    check_budget(p.state_prep.num_qubits() + 1, cfg);
    const Circuit c = dae_circuit(p, cfg.m);
    AmplitudeEstimate est;
    est.method = "DAE";
    est.circuit_width = c.num_qubits();
    est.circuits_submitted = 1;
    est.iterations = cfg.m;
    est.iterations_kind = "oracle powers";
    est.oracle_queries = (1ULL << cfg.m) - 1;
    const auto raw = outcomes_of(c, cfg);
    finish_phase_estimate(est, raw, cfg.m);
    // Bits of the most likely raw y that maps to the reported canonical outcome.
    long long y = est.raw_outcome;
    double best = -1.0;
    for (const auto& [v, pr] : raw) {
        if (canonical_outcome(v, cfg.m) == est.raw_outcome && pr > best) {
            best = pr;
            y = v;
        }
    }
    for (int j = 0; j < cfg.m; ++j) est.bits.push_back(static_cast<int>(y >> j & 1));
    return est;
}

Circuit iae_round_circuit(const EstimationProblem& p, int k) {
    p.validate();
    if (k < 0) throw EstimationError("Grover power must be >= 0");
    const int w = p.state_prep.num_qubits();
    Circuit c(w, 1);
    c.append(p.state_prep);
    if (k > 0) c.append(power(grover_operator(p), k));
    c.measure(p.objective_qubit, 0);
    return c;
}

AmplitudeEstimate iae(const EstimationProblem& p, const PrecisionConfig& cfg) {
    cfg.validate();
    p.validate();
    check_budget(p.state_prep.num_qubits(), cfg);
    constexpr double kMinRatio = 2.0;
    const int theory_rounds =
        static_cast<int>(std::log(kMinRatio * kPi / 8.0 / cfg.epsilon) / std::log(kMinRatio)) + 1;
    const int cap = cfg.max_rounds > 0 ? cfg.max_rounds : std::max(100, 20 * theory_rounds);
    const double shots = static_cast<double>(cfg.shots);

    const Circuit a = p.state_prep;
    const Circuit q = grover_operator(p);

    AmplitudeEstimate est;
    est.method = "IAE";
    est.iterations_kind = "rounds";
    est.circuit_width = a.num_qubits();

    int k = 0;
    bool upper = true;
    double theta_l = 0.0, theta_u = 0.25;
    double a_l = 0.0, a_u = 1.0;
    std::vector<int> powers;
    std::vector<double> ones_per_round;
    while (theta_u - theta_l > cfg.epsilon / kPi) {
        if (static_cast<int>(powers.size()) >= cap) {
            est.converged = false;
            break;
        }
        std::tie(k, upper) = find_next_k(k, upper, theta_l, theta_u, kMinRatio);
        powers.push_back(k);
        const int round = static_cast<int>(powers.size());

        double ones = 0.0;
        if (cfg.mode == ExecMode::Exact) {
            Circuit pure = a;
            if (k > 0) pure.append(power(q, k));
            ones = probability_of_one(pure, p.objective_qubit) * shots;
        } else {
            const ShotCounts counts = run_shots(iae_round_circuit(p, k), cfg.shots, derive_seed(cfg.seed, round));
            const auto it = counts.counts.find("1");
            ones = it == counts.counts.end() ? 0.0 : static_cast<double>(it->second);
        }
        ones_per_round.push_back(ones);
        est.oracle_queries += cfg.shots * static_cast<std::uint64_t>(k);

        // Pool consecutive rounds that used the same power.
        double round_shots = shots;
        double round_ones = ones;
        for (int j = round - 2; j >= 0 && powers[j] == k; --j) {
            round_shots += shots;
            round_ones += ones_per_round[j];
        }
        const auto [ai_min, ai_max] = cfg.interval == ConfidenceInterval::Chernoff
                                          ? chernoff(ones / shots, round_shots, theory_rounds, cfg.alpha)
                                          : clopper_pearson(round_ones, round_shots, cfg.alpha / theory_rounds);
        double th_min, th_max;
        if (upper) {
            th_min = std::acos(1.0 - 2.0 * ai_min) / (2.0 * kPi);
            th_max = std::acos(1.0 - 2.0 * ai_max) / (2.0 * kPi);
        } else {
            th_min = 1.0 - std::acos(1.0 - 2.0 * ai_max) / (2.0 * kPi);
            th_max = 1.0 - std::acos(1.0 - 2.0 * ai_min) / (2.0 * kPi);
        }
        const double scaling = 4.0 * k + 2.0;
        const double new_u = (std::floor(scaling * theta_u) + th_max) / scaling;
        const double new_l = (std::floor(scaling * theta_l) + th_min) / scaling;
        theta_u = new_u;
        theta_l = new_l;
        a_u = std::pow(std::sin(2.0 * kPi * theta_u), 2);
        a_l = std::pow(std::sin(2.0 * kPi * theta_l), 2);
    }
    est.powers = powers;
    est.iterations = static_cast<int>(powers.size());
    est.circuits_submitted = est.iterations;
    est.raw_outcome = k;
    const double lo = std::min(a_l, a_u), hi = std::max(a_l, a_u);
    est.interval = std::make_pair(lo, hi);
    est.a_hat = 0.5 * (lo + hi);
    return est;
}

double post_process(double a_hat, const PostProcess& post) {
    switch (post.kind) {
        case PostProcess::Kind::Raw:
        case PostProcess::Kind::Cdf:
            return a_hat;
        case PostProcess::Kind::LinearInverse: {
            if (post.c == 0.0) throw EstimationError("linear post-processing needs c != 0");
            const double w = post.weight;
            const double f = 0.5 * w + (a_hat - 0.5 * w) / post.c;
            return post.f_lo * w + (post.f_hi - post.f_lo) * f;
        }
    }
    return a_hat;
}

double post_process(const AmplitudeEstimate& est, const EstimationProblem& p) {
    return post_process(est.a_hat, p.post);
}

double qae_error_bound(int m) { return kPi / static_cast<double>(1LL << m); }

double linearization_bias_bound(double c, double max_deviation) {
    return (2.0 / 3.0) * c * c * std::pow(max_deviation, 3);
}

}  // namespace qrisk

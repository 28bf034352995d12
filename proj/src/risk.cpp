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
#include <cstdio>

#include "qrisk/risk.hpp"

namespace qrisk {

namespace {

constexpr double kCdfSlack = 1e-12;

std::string mode_name(const PrecisionConfig& p) { return p.mode == ExecMode::Exact ? "exact" : "shots"; }

RiskReport base_report(const std::string& stat, const RiskConfig& cfg) {
    RiskReport r;
    r.statistic = stat;
    r.method = method_name(cfg.method);
    r.mode = mode_name(cfg.precision);
    return r;
}

void absorb(RiskReport& r, const AmplitudeEstimate& est) {
    r.oracle_queries += est.oracle_queries;
    r.circuits_submitted += est.circuits_submitted;
    r.iterations_kind = est.iterations_kind;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::QAE: return "QAE";
        case Method::IAE: return "IAE";
        case Method::DAE: return "DAE";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (u == "QAE") return Method::QAE;
    if (u == "IAE") return Method::IAE;
    if (u == "DAE") return Method::DAE;
    throw RiskError("unknown method '" + s + "' (expected qae, iae or dae)");
}

double classical_cdf(const DiscreteDistribution& d, long long l) {
    double s = 0.0;
    for (long long i = 0; i <= l && i < static_cast<long long>(d.size()); ++i) s += d.probs[i];
    return s;
}

long long classical_var(const DiscreteDistribution& d, double alpha) {
    const double level = 1.0 - alpha;
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        s += d.probs[i];
        if (s >= level - kCdfSlack) return static_cast<long long>(i);
    }
    return static_cast<long long>(d.size()) - 1;
}

double classical_cvar(const DiscreteDistribution& d, long long l, Tail tail) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto li = static_cast<long long>(i);
        const bool in = tail == Tail::Upper ? li >= l : li <= l;
        if (!in) continue;
        num += static_cast<double>(i) * d.probs[i];
        den += d.probs[i];
    }
    return den > 0.0 ? num / den : static_cast<double>(l);
}

ClassicalRisk classical_oracle(const DiscreteDistribution& d, double alpha) {
    ClassicalRisk r;
    for (std::size_t i = 0; i < d.size(); ++i) r.expected += static_cast<double>(i) * d.probs[i];
    r.var = classical_var(d, alpha);
    r.cvar_upper = classical_cvar(d, r.var, Tail::Upper);
    r.cvar_lower = classical_cvar(d, r.var, Tail::Lower);
    return r;
}

AmplitudeEstimate run_estimator(const EstimationProblem& p, const RiskConfig& cfg) {
    try {
        switch (cfg.method) {
            case Method::QAE: return qae_canonical(p, cfg.precision);
            case Method::IAE: return iae(p, cfg.precision);
            case Method::DAE: return dae(p, cfg.precision);
        }
    } catch (const SimulationError& e) {
        throw EstimationError(e.what());
    }
    throw RiskError("unknown method");
}

double amplitude_error_bound(const AmplitudeEstimate& est, const RiskConfig& cfg) {
    if (est.interval) return 0.5 * (est.interval->second - est.interval->first);
    return qae_error_bound(cfg.precision.m);
}

RiskReport expected_value(const DiscreteDistribution& d, const ScaleMap& map, const RiskConfig& cfg) {
    map.validate();
    if (map.bins != d.size()) throw RiskError("scale map and distribution disagree on N");
    const EstimationProblem p = expectation_problem(d, cfg.c);
    const AmplitudeEstimate est = run_estimator(p, cfg);
    const double last = static_cast<double>(d.size() - 1);
    RiskReport r = base_report("E", cfg);
    absorb(r, est);
    r.iterations = est.iterations;
    r.scaled = std::clamp(post_process(est, p), 0.0, last);
    r.unscaled = unscale(r.scaled, map);
    r.exact_scaled = classical_oracle(d, 0.5).expected;
    r.error_bound = last * (amplitude_error_bound(est, cfg) / cfg.c + linearization_bias_bound(cfg.c));
    r.flagged = !est.converged;
    return r;
}

double cdf_at(const DiscreteDistribution& d, long long l, const RiskConfig& cfg, double* bound,
              AmplitudeEstimate* out) {
    const long long last = static_cast<long long>(d.size()) - 1;
    if (l < 0 || l > last) throw RiskError("CDF threshold outside [0, N-1]");
    if (l == last) {  // P[X <= N-1] = 1 by definition
        if (bound) *bound = 0.0;
        if (out) {
            *out = AmplitudeEstimate{};
            out->method = method_name(cfg.method);
            out->a_hat = 1.0;
        }
        return 1.0;
    }
    const EstimationProblem p = cdf_problem(d, l, cfg.comparator);
    const AmplitudeEstimate est = run_estimator(p, cfg);
    if (bound) *bound = amplitude_error_bound(est, cfg);
    if (out) *out = est;
    return est.a_hat;
}

RiskReport cdf_report(const DiscreteDistribution& d, const ScaleMap& map, long long l, const RiskConfig& cfg) {
    map.validate();
    AmplitudeEstimate est;
    double bound = 0.0;
    RiskReport r = base_report("CDF", cfg);
    r.threshold = l;
    r.scaled = cdf_at(d, l, cfg, &bound, &est);
    absorb(r, est);
    r.iterations = est.iterations;
    r.unscaled = r.scaled;  // a probability has no currency scale
    r.exact_scaled = classical_cdf(d, l);
    r.error_bound = bound;
    r.flagged = !est.converged;
    return r;
}

RiskReport value_at_risk(const DiscreteDistribution& d, const ScaleMap& map, double alpha, const RiskConfig& cfg) {
    map.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw RiskError("alpha must be in (0, 1)");
    RiskConfig cdf_cfg = cfg;
    if (cfg.exact_cdf_for_var) cdf_cfg.precision.mode = ExecMode::Exact;
    RiskReport r = base_report("VaR", cfg);
    r.mode = mode_name(cdf_cfg.precision);
    r.alpha = alpha;
    r.iterations_kind = "bisection steps";
    const double level = 1.0 - alpha;
    long long lo = 0, hi = static_cast<long long>(d.size()) - 1;
    double delta = 0.0;
    std::vector<std::pair<long long, double>> seen;
    while (lo < hi) {
        const long long mid = lo + (hi - lo) / 2;
        double b = 0.0;
        AmplitudeEstimate est;
        const double f = cdf_at(d, mid, cdf_cfg, &b, &est);
        r.oracle_queries += est.oracle_queries;
        r.circuits_submitted += est.circuits_submitted;
        ++r.iterations;
        delta = std::max(delta, b);
        seen.emplace_back(mid, f);
        if (f >= level - kCdfSlack) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) {
        if (seen[i].second + kCdfSlack < seen[i - 1].second) {
            r.flagged = true;
            r.note = "non-monotone CDF estimates during bisection";
        }
    }
    r.threshold = lo;
    r.scaled = static_cast<double>(lo);
    r.unscaled = unscale(r.scaled, map);
    const long long exact = classical_var(d, alpha);
    r.exact_scaled = static_cast<double>(exact);
    const long long bracket_lo = classical_var(d, alpha + delta);
    const long long bracket_hi = classical_var(d, alpha - delta);
    r.error_bound = static_cast<double>(std::max(exact - bracket_lo, bracket_hi - exact));
    return r;
}

RiskReport conditional_value_at_risk(const DiscreteDistribution& d, const ScaleMap& map, double alpha,
                                     const RiskConfig& cfg) {
    const RiskReport var = value_at_risk(d, map, alpha, cfg);
    const long long l = var.threshold;
    const long long last = static_cast<long long>(d.size()) - 1;
    RiskReport r = base_report("CVaR", cfg);
    r.alpha = alpha;
    r.threshold = l;
    r.oracle_queries = var.oracle_queries;
    r.circuits_submitted = var.circuits_submitted;
    r.exact_scaled = classical_cvar(d, l, cfg.tail);
    if (cfg.tail == Tail::Lower && l == 0) {
        r.scaled = 0.0;
        r.unscaled = unscale(0.0, map);
        r.flagged = true;
        r.note = "empty lower tail: VaR is bin 0";
        return r;
    }
    // Tail mass from the CDF estimator.
    double w = 1.0, dw = 0.0;
    if (cfg.tail == Tail::Upper) {
        if (l > 0) {
            AmplitudeEstimate est;
            w = 1.0 - cdf_at(d, l - 1, cfg, &dw, &est);
            r.oracle_queries += est.oracle_queries;
            r.circuits_submitted += est.circuits_submitted;
        }
    } else {
        AmplitudeEstimate est;
        w = cdf_at(d, l, cfg, &dw, &est);
        r.oracle_queries += est.oracle_queries;
        r.circuits_submitted += est.circuits_submitted;
    }
    CvarObjective obj;
    obj.threshold = l;
    obj.tail = cfg.tail;
    obj.n = d.num_qubits();
    obj.mode = cfg.ramp;
    obj.c = cfg.c;
    obj.comparator = cfg.comparator;
    const EstimationProblem p = cvar_problem(d, obj);
    const AmplitudeEstimate est = run_estimator(p, cfg);
    absorb(r, est);
    r.iterations = est.iterations;
    const double da = amplitude_error_bound(est, cfg);
    double s = est.a_hat, ds = da;
    if (cfg.ramp == RampMode::Linearized) {
        s = 0.5 * w + (est.a_hat - 0.5 * w) / cfg.c;
        ds = da / cfg.c + w * linearization_bias_bound(cfg.c) + dw * std::abs(0.5 / cfg.c - 0.5);
    }
    // CVaR = lo + (hi - lo) * E[g | tail], with g the ramp normalised over the tail.
    const double lo = cfg.tail == Tail::Upper ? static_cast<double>(l) : 0.0;
    const double hi = cfg.tail == Tail::Upper ? static_cast<double>(last) : static_cast<double>(l);
    const double scale = hi - lo;
    if (!(w > 0.0)) {
        r.scaled = static_cast<double>(l);
        r.flagged = true;
        r.note = "estimated tail mass is zero";
        r.error_bound = hi - lo;
    } else {
        r.scaled = std::clamp(lo + scale * s / w, lo, hi);
        r.error_bound = std::min(hi - lo, scale * (ds + dw) / w);
    }
    r.unscaled = unscale(r.scaled, map);
    r.flagged = r.flagged || !est.converged;
    return r;
}

std::string format_report_row(const RiskReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%d,%.6g,%.0f", r.statistic.c_str(), r.mode.c_str(), r.method.c_str(),
                  r.iterations, r.scaled, r.unscaled);
    return buf;
}

}  // namespace qrisk

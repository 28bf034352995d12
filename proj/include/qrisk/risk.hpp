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

/**
 * @file risk.hpp
 * @brief Delta-gross-margin scenarios, binning and the E / CDF / VaR / CVaR pipelines.
 *
 * "Scaled" values live on the bin-index axis 0..N-1; "unscaled" values are in
 * currency via the affine ScaleMap. VaR at level alpha is the smallest bin l
 * with P[X <= l] >= 1 - alpha, so VaR70 means alpha = 0.7.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrisk/encoding.hpp"
#include "qrisk/estimation.hpp"

namespace qrisk {

class RiskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MarketModelConfig {
    int stations = 3;
    int days = 365;
    std::vector<double> asp = {62.0, 60.0, 58.0};       // sale price per unit volume
    std::vector<double> beta = {900.0, 1200.0, 1000.0};  // volume per degree below t_ref
    double t_ref = 18.0;
    // Season normal tau(j) = season_mean + season_amplitude * cos(2 pi (j - season_peak_day) / 365).
    double season_mean = 11.0;
    double season_amplitude = 9.0;
    double season_peak_day = 200.0;
    // Temperature deviation: dx = -kappa_t x dt + sigma_t dW.
    double kappa_t = 0.25;
    double sigma_t = 2.5;
    // Log gas price: dy = kappa_g (mu_g - y) dt + sigma_g dW', corr(dW, dW') = rho.
    double kappa_g = 0.05;
    double mu_g = 3.9120230054281460;  // ln 50
    double sigma_g = 0.03;
    double rho = -0.4;

    void validate() const;
};

/// One delta-gross-margin sample per repetition; repetition r uses its own derived stream.
std::vector<double> simulate_deltagm(const MarketModelConfig& cfg, std::size_t repetitions, std::uint64_t seed);

std::string write_scenarios_csv(const std::vector<double>& samples);
std::vector<double> read_scenarios_csv(const std::string& text);

struct ScaleMap {
    double m1 = 0.0;
    double m2 = 1.0;
    std::size_t bins = 2;

    void validate() const;
};

double unscale(double scaled, const ScaleMap& map);

struct BinnedDistribution {
    DiscreteDistribution dist;
    ScaleMap map;
    std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max]; the maximum lands in bin N-1.
BinnedDistribution bin_distribution(const std::vector<double>& samples, int n);

enum class Method { QAE, IAE, DAE };
std::string method_name(Method m);
Method parse_method(const std::string& s);

struct RiskConfig {
    Method method = Method::QAE;
    PrecisionConfig precision;
    double c = 0.25;
    Tail tail = Tail::Upper;
    RampMode ramp = RampMode::Exact;
    ComparatorMode comparator = ComparatorMode::Oracle;
    /// VaR bisection evaluates the CDF in exact mode even when shots are requested.
    bool exact_cdf_for_var = true;
};

struct ClassicalRisk {
    double expected = 0.0;
    long long var = 0;
    double cvar_upper = 0.0;
    double cvar_lower = 0.0;
};

/// Brute force over the bins. VaR uses the threshold 1 - alpha.
ClassicalRisk classical_oracle(const DiscreteDistribution& d, double alpha);
double classical_cdf(const DiscreteDistribution& d, long long l);
long long classical_var(const DiscreteDistribution& d, double alpha);
/// Tail conditional mean with an explicit threshold.
double classical_cvar(const DiscreteDistribution& d, long long l, Tail tail);

struct RiskReport {
    std::string statistic;  // "E", "CDF", "VaR", "CVaR"
    double alpha = 0.0;
    long long threshold = -1;
    std::string method;
    std::string mode;
    int iterations = 0;
    std::string iterations_kind;
    std::uint64_t oracle_queries = 0;
    int circuits_submitted = 0;
    double scaled = 0.0;
    double unscaled = 0.0;
    double exact_scaled = 0.0;  // classical oracle on the same distribution
    double error_bound = 0.0;   // stated bound on |scaled - exact| (scaled units)
    bool flagged = false;
    std::string note;
};

/// Half-width bound on |a_hat - a| implied by the estimator and its configuration.
double amplitude_error_bound(const AmplitudeEstimate& est, const RiskConfig& cfg);

AmplitudeEstimate run_estimator(const EstimationProblem& p, const RiskConfig& cfg);

RiskReport expected_value(const DiscreteDistribution& d, const ScaleMap& map, const RiskConfig& cfg);
RiskReport cdf_report(const DiscreteDistribution& d, const ScaleMap& map, long long l, const RiskConfig& cfg);
/// Estimated P[X <= l]; `bound` receives the amplitude error bound when non-null.
double cdf_at(const DiscreteDistribution& d, long long l, const RiskConfig& cfg, double* bound = nullptr,
              AmplitudeEstimate* est = nullptr);
RiskReport value_at_risk(const DiscreteDistribution& d, const ScaleMap& map, double alpha, const RiskConfig& cfg);
RiskReport conditional_value_at_risk(const DiscreteDistribution& d, const ScaleMap& map, double alpha,
                                     const RiskConfig& cfg);

/// "E", "VaR" and "CVaR" rows: the Table-style line "statistic,mode,algorithm,iterations,scaled,unscaled".
std::string format_report_row(const RiskReport& r);

}  // namespace qrisk

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
#include <numbers>
#include <sstream>

#include "qrisk/random.hpp"
#include "qrisk/risk.hpp"

namespace qrisk {

void MarketModelConfig::validate() const {
    if (stations < 1) throw RiskError("stations must be >= 1");
    if (days < 1) throw RiskError("days must be >= 1");
    if (static_cast<int>(asp.size()) != stations || static_cast<int>(beta.size()) != stations) {
        throw RiskError("asp and beta need one entry per station");
    }
    if (!(std::abs(rho) <= 1.0)) throw RiskError("correlation rho must lie in [-1, 1]");
    if (sigma_t < 0 || sigma_g < 0) throw RiskError("volatilities must be >= 0");
    if (kappa_t < 0 || kappa_g < 0) throw RiskError("mean-reversion rates must be >= 0");
}

std::vector<double> simulate_deltagm(const MarketModelConfig& cfg, std::size_t repetitions, std::uint64_t seed) {
    cfg.validate();
    if (repetitions < 1) throw RiskError("need at least one repetition");
    const double dt = 1.0;
    const double sdt = std::sqrt(dt);
    const double rho_c = std::sqrt(std::max(0.0, 1.0 - cfg.rho * cfg.rho));
    auto volume = [&](int i, double t) { return std::max(0.0, cfg.beta[i] * (cfg.t_ref - t)); };
    std::vector<double> out(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
        Rng rng(derive_seed(seed, r));
        double total = 0.0;
        for (int i = 0; i < cfg.stations; ++i) {
            double x = 0.0;
            double y = cfg.mu_g;
            for (int j = 0; j < cfg.days; ++j) {
                const double tau = cfg.season_mean +
                                   cfg.season_amplitude *
                                       std::cos(2.0 * std::numbers::pi * (j - cfg.season_peak_day) / 365.0);
                const double temp = tau + x;
                total += (volume(i, temp) - volume(i, tau)) * (cfg.asp[i] - std::exp(y));
                const double z1 = rng.normal();
                const double z2 = rng.normal();
                x += -cfg.kappa_t * x * dt + cfg.sigma_t * sdt * z1;
                y += cfg.kappa_g * (cfg.mu_g - y) * dt + cfg.sigma_g * sdt * (cfg.rho * z1 + rho_c * z2);
            }
        }
        out[r] = total;
    }
    return out;
}

std::string write_scenarios_csv(const std::vector<double>& samples) {
    std::string out = "delta_gm\n";
    char buf[40];
    for (double v : samples) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out += buf;
    }
    return out;
}

std::vector<double> read_scenarios_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> out;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "delta_gm") continue;
        }
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw RiskError("bad scenario row '" + line + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw RiskError("scenario file has no samples");
    return out;
}

void ScaleMap::validate() const {
    if (!(m1 < m2)) throw RiskError("scale map needs M1 < M2");
    if (bins < 2 || (bins & (bins - 1)) != 0) throw RiskError("bin count must be a power of two >= 2");
}

double unscale(double scaled, const ScaleMap& map) {
    map.validate();
    return map.m1 + (map.m2 - map.m1) / static_cast<double>(map.bins) * scaled;
}

BinnedDistribution bin_distribution(const std::vector<double>& samples, int n) {
    if (samples.empty()) throw RiskError("cannot bin an empty scenario set");
    if (n < 1 || n > 20) throw RiskError("bin qubits must be in 1..20");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    BinnedDistribution out;
    out.map = {*lo, *hi, std::size_t{1} << n};
    if (!(out.map.m1 < out.map.m2)) throw RiskError("degenerate range: all samples equal");
    const std::size_t nb = out.map.bins;
    out.counts.assign(nb, 0);
    const double width = out.map.m2 - out.map.m1;
    for (double v : samples) {
        auto idx = static_cast<std::size_t>(std::floor((v - out.map.m1) / width * static_cast<double>(nb)));
        ++out.counts[std::min(idx, nb - 1)];
    }
    std::vector<double> p(nb);
    for (std::size_t i = 0; i < nb; ++i) p[i] = static_cast<double>(out.counts[i]) / static_cast<double>(samples.size());
    out.dist = DiscreteDistribution(std::move(p));
    return out;
}

}  // namespace qrisk

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

#include "qrisk/records.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qrisk {

using nlohmann::json;

json to_json(const AmplitudeEstimate& est) {
    json j;
    j["method"] = est.method;
    j["a_hat"] = est.a_hat;
    j["interval"] = est.interval ? json::array({est.interval->first, est.interval->second}) : json(nullptr);
    j["raw_outcome"] = est.raw_outcome;
    if (!est.bits.empty()) j["bits_lsb_first"] = est.bits;
    if (!est.powers.empty()) j["powers"] = est.powers;
    j["oracle_queries"] = est.oracle_queries;
    j["iterations"] = est.iterations;
    j["iterations_kind"] = est.iterations_kind;
    j["circuits_submitted"] = est.circuits_submitted;
    j["circuit_width"] = est.circuit_width;
    j["converged"] = est.converged;
    return j;
}

json to_json(const RiskReport& r) {
    json j;
    j["statistic"] = r.statistic;
    j["mode"] = r.mode;
    j["algorithm"] = r.method;
    j["iterations"] = r.iterations;
    j["iterations_kind"] = r.iterations_kind;
    j["scaled"] = r.scaled;
    j["unscaled"] = r.unscaled;
    j["exact_scaled"] = r.exact_scaled;
    j["error_bound"] = r.error_bound;
    j["oracle_queries"] = r.oracle_queries;
    j["circuits_submitted"] = r.circuits_submitted;
    if (r.statistic == "VaR" || r.statistic == "CVaR") j["alpha"] = r.alpha;
    if (r.threshold >= 0) j["threshold"] = r.threshold;
    j["flagged"] = r.flagged;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const CircuitMetrics& m) {
    return json{{"cnot_count", m.cnot_count},
                {"multi_qubit_count", m.multi_qubit_count},
                {"gate_count", m.gate_count},
                {"depth", m.depth},
                {"width", m.width}};
}

json to_json(const CompileReport& r) {
    json j;
    json blocks = json::array();
    for (const BlockReport& b : r.blocks) {
        blocks.push_back({{"window", {b.q_lo, b.q_lo + b.span - 1}},
                          {"instructions", {b.first, b.last}},
                          {"compiled", b.compiled},
                          {"D", b.depth},
                          {"distance", b.distance},
                          {"embedded_distance", b.embedded_distance},
                          {"cx_before", b.cx_before},
                          {"cx_after", b.cx_after}});
    }
    j["blocks"] = blocks;
    j["global_distance"] = r.distance >= 0 ? json(r.distance) : json(nullptr);
    j["fidelity"] = r.fidelity >= 0 ? json(r.fidelity) : json(nullptr);
    j["converged"] = r.converged;
    j["cnot_before"] = r.before.cnot_count;
    j["cnot_after"] = r.after.cnot_count;
    j["depth_before"] = r.before.depth;
    j["depth_after"] = r.after.depth;
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("error writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into '" + path + "'");
    }
}

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("config line " + std::to_string(no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw IoError("config line " + std::to_string(no) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace qrisk

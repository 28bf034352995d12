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

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qrisk/circuit.hpp"

namespace qrisk {

namespace {

struct KindName {
    const char* name;
    GateKind kind;
};

constexpr KindName kKinds[] = {
    {"X", GateKind::X},         {"Y", GateKind::Y},         {"Z", GateKind::Z},
    {"H", GateKind::H},         {"RX", GateKind::RX},       {"RY", GateKind::RY},
    {"RZ", GateKind::RZ},       {"PHASE", GateKind::PHASE}, {"MEASURE", GateKind::MEASURE},
    {"RESET", GateKind::RESET}, {"BARRIER", GateKind::BARRIER},
};

bool lookup_kind(const std::string& s, GateKind* kind) {
    for (const auto& k : kKinds) {
        if (s == k.name) {
            *kind = k.kind;
            return true;
        }
    }
    return false;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw CircuitError("line " + std::to_string(line) + ": " + msg);
}

int parse_index(const std::string& s, char prefix, int line) {
    if (s.size() < 2 || s[0] != prefix) parse_fail(line, "expected " + std::string(1, prefix) + "<index>, got '" + s + "'");
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(s.c_str() + 1, &end, 10);
    if (errno != 0 || *end != '\0' || v < 0 || v > 1'000'000) parse_fail(line, "bad index '" + s + "'");
    return static_cast<int>(v);
}

double parse_double(const std::string& s, int line) {
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end == s.c_str() || *end != '\0') parse_fail(line, "bad number '" + s + "'");
    return v;
}

// Splits a mnemonic such as "MCRY" into base kind and whether it is controlled.
// Bare "MEASURE" would otherwise be read as "MC" + "EASURE", so plain names win.
bool split_mnemonic(const std::string& word, GateKind* kind, int* ctrl_prefix) {
    if (lookup_kind(word, kind)) {
        *ctrl_prefix = 0;
        return true;
    }
    if (word.rfind("MC", 0) == 0 && lookup_kind(word.substr(2), kind)) {
        *ctrl_prefix = 2;
        return true;
    }
    if (word.rfind("C", 0) == 0 && lookup_kind(word.substr(1), kind)) {
        *ctrl_prefix = 1;
        return true;
    }
    return false;
}

}  // namespace

std::string to_text(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.num_qubits() << "\n";
    out << "clbits " << c.num_clbits() << "\n";
    for (const Instruction& inst : c) {
        out << inst.name();
        for (std::size_t i = 0; i < inst.qubits.size(); ++i) {
            out << (i == 0 ? " q" : ",q") << inst.qubits[i];
        }
        if (inst.kind == GateKind::MEASURE) out << " c" << inst.clbit;
        if (inst.has_param()) out << " theta=" << format_double(inst.theta);
        if (inst.condition) out << " cond=c" << inst.condition->clbit << "==" << inst.condition->value;
        out << "\n";
    }
    return out.str();
}

Circuit from_text(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int nq = -1;
    int nc = 0;
    Circuit c;
    bool started = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "qubits" || word == "clbits") {
            if (started) parse_fail(line_no, "header after instructions");
            std::string v;
            if (!(ls >> v)) parse_fail(line_no, "missing count");
            int n = static_cast<int>(parse_double(v, line_no));
            if (n < 0 || std::to_string(n) != v) parse_fail(line_no, "bad count '" + v + "'");
            (word == "qubits" ? nq : nc) = n;
            continue;
        }
        if (!started) {
            if (nq < 0) parse_fail(line_no, "missing 'qubits' header");
            c = Circuit(nq, nc);
            started = true;
        }
        GateKind kind;
        int prefix = 0;
        if (!split_mnemonic(word, &kind, &prefix)) parse_fail(line_no, "unknown instruction '" + word + "'");
        Instruction inst;
        inst.kind = kind;
        std::string tok;
        bool have_qubits = false;
        bool have_theta = false;
        while (ls >> tok) {
            if (tok[0] == 'q' && !have_qubits) {
                std::size_t pos = 0;
                while (pos <= tok.size()) {
                    std::size_t comma = tok.find(',', pos);
                    if (comma == std::string::npos) comma = tok.size();
                    inst.qubits.push_back(parse_index(tok.substr(pos, comma - pos), 'q', line_no));
                    pos = comma + 1;
                }
                have_qubits = true;
            } else if (tok[0] == 'c' && tok.rfind("cond=", 0) != 0) {
                if (kind != GateKind::MEASURE) parse_fail(line_no, "classical target on " + word);
                inst.clbit = parse_index(tok, 'c', line_no);
            } else if (tok.rfind("theta=", 0) == 0) {
                inst.theta = parse_double(tok.substr(6), line_no);
                have_theta = true;
            } else if (tok.rfind("cond=", 0) == 0) {
                std::string body = tok.substr(5);
                auto eq = body.find("==");
                if (eq == std::string::npos) parse_fail(line_no, "bad condition '" + tok + "'");
                Condition cond;
                cond.clbit = parse_index(body.substr(0, eq), 'c', line_no);
                std::string val = body.substr(eq + 2);
                if (val != "0" && val != "1") parse_fail(line_no, "condition value must be 0 or 1");
                cond.value = val == "1" ? 1 : 0;
                inst.condition = cond;
            } else {
                parse_fail(line_no, "unexpected token '" + tok + "'");
            }
        }
        if (inst.is_unitary()) {
            inst.num_controls = static_cast<int>(inst.qubits.size()) - 1;
            const int expected = inst.num_controls == 0 ? 0 : (inst.num_controls == 1 ? 1 : 2);
            if (expected != prefix) parse_fail(line_no, "mnemonic '" + word + "' does not match qubit count");
            if (inst.has_param() != have_theta) parse_fail(line_no, have_theta ? "unexpected theta" : "missing theta");
        } else if (prefix != 0) {
            parse_fail(line_no, "'" + word + "' cannot be controlled");
        }
        if (kind == GateKind::MEASURE && inst.clbit < 0) parse_fail(line_no, "MEASURE needs c<k>");
        if ((kind == GateKind::MEASURE || kind == GateKind::RESET) && inst.qubits.size() != 1) {
            parse_fail(line_no, word + " takes one qubit");
        }
        try {
            c.append(std::move(inst));
        } catch (const CircuitError& e) {
            parse_fail(line_no, e.what());
        }
    }
    if (!started) {
        if (nq < 0) throw CircuitError("missing 'qubits' header");
        c = Circuit(nq, nc);
    }
    return c;
}

}  // namespace qrisk

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

// qrisk command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 io / unreadable input, 3 estimation,
// 4 compilation.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrisk/compiler.hpp"
#include "qrisk/encoding.hpp"
#include "qrisk/estimation.hpp"
#include "qrisk/records.hpp"
#include "qrisk/risk.hpp"

using nlohmann::json;
using namespace qrisk;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kEstimation = 3, kCompile = 4 };

struct ExitError {
    int code;
    std::string message;
};

template <typename F>
auto guarded(int code, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ExitError&) {
        throw;
    } catch (const IoError& e) {
        throw ExitError{kIo, e.what()};
    } catch (const std::exception& e) {
        throw ExitError{code, e.what()};
    }
}

[[noreturn]] void usage_error(const std::string& msg) { throw ExitError{kUsage, msg}; }

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
        } catch (const std::logic_error&) {
            usage_error("--" + key + ": '" + item + "' is not a number");
        }
    }
    return out;
}

// Options shared by every subcommand.
struct Common {
    std::string config;
    std::uint64_t seed = 0;
    std::string mode = "exact";
    std::uint64_t shots = 5000;
    std::string output;
};

struct GenerateArgs {
    std::size_t samples = 10000;
    int stations = 3;
    int days = 365;
    std::string asp = "62,60,58";
    std::string beta = "900,1200,1000";
    MarketModelConfig market;
};

struct BinArgs {
    std::string scenarios;
    int n = 3;
    std::string record;
};

struct EstimateArgs {
    std::string statistic;
    std::string dist;
    std::string scenarios;
    int n = 3;
    double m1 = std::nan("");
    double m2 = std::nan("");
    std::string method = "qae";
    std::string methods = "qae,iae,dae";
    int m = 3;
    double epsilon = 0.01;
    double confidence = 0.95;
    double alpha = 0.7;
    double c = 0.25;
    std::string tail = "upper";
    std::string ramp = "exact";
    std::string comparator = "oracle";
    long long level = -1;
    std::string emit_circuit;
    std::string plot_data;
};

struct CompileArgs {
    std::string kind;
    std::string input;
    std::string report;
    int depth = 10;
    int span = 7;
    int restarts = -1;
    int max_iterations = -1;
    std::string layout = "spin";
    std::string connectivity = "full";
    std::string wide = "error";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "key=value config file; flags override it");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--mode", c.mode, "exact or shots")->check(CLI::IsMember({"exact", "shots"}));
    sub->add_option("--shots", c.shots, "shots per circuit in shot mode");
    sub->add_option("-o,--output", c.output, "output path");
}

// Values from --config become option defaults before parsing, so explicit flags win.
void apply_config(CLI::App& app, int argc, char** argv) {
    std::string path;
    CLI::App* sub = nullptr;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) path = argv[i + 1];
        if (a.rfind("--config=", 0) == 0) path = a.substr(9);
        if (!sub) {
            for (CLI::App* s : app.get_subcommands({})) {
                if (s->get_name() == a) sub = s;
            }
        }
    }
    if (path.empty()) return;
    if (!sub) usage_error("--config needs a subcommand");
    const std::string text = guarded(kIo, [&] { return read_file(path); });
    const auto kv = guarded(kUsage, [&] { return parse_config(text); });
    for (const auto& [raw, value] : kv) {
        std::string key = raw;
        for (char& ch : key) if (ch == '_') ch = '-';
        if (key == "config") continue;
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) usage_error("config key '" + raw + "' is not an option of '" + sub->get_name() + "'");
        try {
            opt->default_val(value);
        } catch (const CLI::Error& e) {
            usage_error("config key '" + raw + "': " + e.what());
        }
    }
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    guarded(kIo, [&] {
        write_file_atomic(path, content);
        return 0;
    });
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int cmd_generate(const Common& common, GenerateArgs& g) {
    MarketModelConfig cfg = g.market;
    cfg.stations = g.stations;
    cfg.days = g.days;
    cfg.asp = parse_list(g.asp, "asp");
    cfg.beta = parse_list(g.beta, "beta");
    if (g.samples < 1) usage_error("--samples must be >= 1");
    guarded(kUsage, [&] {
        cfg.validate();
        return 0;
    });
    const auto samples = guarded(kEstimation, [&] { return simulate_deltagm(cfg, g.samples, common.seed); });
    emit(common.output, write_scenarios_csv(samples));
    if (!common.output.empty()) {
        std::printf("wrote %zu scenarios to %s\n", samples.size(), common.output.c_str());
    }
    return kOk;
}

int cmd_bin(const Common& common, const BinArgs& b) {
    if (b.scenarios.empty()) usage_error("bin needs --scenarios");
    if (b.n < 1 || b.n > 20) usage_error("--n must be in 1..20");
    const std::string text = guarded(kIo, [&] { return read_file(b.scenarios); });
    const auto samples = guarded(kIo, [&] { return read_scenarios_csv(text); });
    const BinnedDistribution bd = guarded(kEstimation, [&] { return bin_distribution(samples, b.n); });
    emit(common.output, write_distribution_csv(bd.dist));
    json rec{{"command", "bin"},
             {"samples", samples.size()},
             {"n", b.n},
             {"bins", bd.map.bins},
             {"m1", bd.map.m1},
             {"m2", bd.map.m2},
             {"counts", bd.counts}};
    if (!b.record.empty() || !common.output.empty()) {
        if (!b.record.empty()) emit(b.record, dump(rec));
        std::printf("binned %zu samples into %zu bins, M1=%.17g M2=%.17g\n", samples.size(), bd.map.bins,
                    bd.map.m1, bd.map.m2);
    } else {
        std::cout << dump(rec);
    }
    return kOk;
}

struct Inputs {
    DiscreteDistribution dist;
    ScaleMap map;
};

Inputs load_inputs(const EstimateArgs& e) {
    if (e.dist.empty() == e.scenarios.empty()) usage_error("give exactly one of --dist or --scenarios");
    Inputs in;
    if (!e.scenarios.empty()) {
        if (e.n < 1 || e.n > 12) usage_error("--n must be in 1..12");
        const std::string text = guarded(kIo, [&] { return read_file(e.scenarios); });
        const auto samples = guarded(kIo, [&] { return read_scenarios_csv(text); });
        const BinnedDistribution bd = guarded(kEstimation, [&] { return bin_distribution(samples, e.n); });
        in.dist = bd.dist;
        in.map = bd.map;
    } else {
        const std::string text = guarded(kIo, [&] { return read_file(e.dist); });
        in.dist = guarded(kIo, [&] { return read_distribution_csv(text); });
        in.map.bins = in.dist.size();
        in.map.m1 = std::isnan(e.m1) ? 0.0 : e.m1;
        in.map.m2 = std::isnan(e.m2) ? static_cast<double>(in.dist.size()) : e.m2;
    }
    if (in.dist.num_qubits() > 12) usage_error("distributions above 12 qubits are outside the simulator budget");
    guarded(kUsage, [&] {
        in.map.validate();
        return 0;
    });
    return in;
}

RiskConfig risk_config(const Common& common, const EstimateArgs& e, const std::string& method) {
    RiskConfig cfg;
    cfg.method = guarded(kUsage, [&] { return parse_method(method); });
    cfg.precision.m = e.m;
    cfg.precision.epsilon = e.epsilon;
    cfg.precision.alpha = 1.0 - e.confidence;
    cfg.precision.shots = common.shots;
    cfg.precision.mode = common.mode == "shots" ? ExecMode::Shots : ExecMode::Exact;
    cfg.precision.seed = common.seed;
    cfg.c = e.c;
    cfg.tail = e.tail == "lower" ? Tail::Lower : Tail::Upper;
    cfg.ramp = e.ramp == "linear" ? RampMode::Linearized : RampMode::Exact;
    cfg.comparator = e.comparator == "decomposed" ? ComparatorMode::Decomposed : ComparatorMode::Oracle;
    guarded(kUsage, [&] {
        cfg.precision.validate();
        return 0;
    });
    if (!(e.c > 0.0 && e.c <= 1.0)) usage_error("--c must be in (0, 1]");
    if (!(e.alpha > 0.0 && e.alpha < 1.0)) usage_error("--alpha must be in (0, 1)");
    if (common.shots < 1) usage_error("--shots must be >= 1");
    return cfg;
}

json config_record(const Common& common, const EstimateArgs& e, const Inputs& in) {
    return json{{"n", in.dist.num_qubits()}, {"m", e.m},           {"epsilon", e.epsilon},
                {"confidence", e.confidence}, {"alpha", e.alpha},   {"c", e.c},
                {"tail", e.tail},             {"ramp", e.ramp},     {"comparator", e.comparator},
                {"mode", common.mode},        {"shots", common.shots}, {"seed", common.seed},
                {"m1", in.map.m1},            {"m2", in.map.m2}};
}

struct Row {
    std::string statistic;
    std::string mode;
    std::string algorithm;
    int iterations;
    double scaled;
    double unscaled;
};

Row exact_row(const std::string& stat, double scaled, const ScaleMap& map) {
    return Row{stat, "classical", "Exact value", 0, scaled, unscale(scaled, map)};
}

Row report_row(const RiskReport& r) { return Row{r.statistic, r.mode, r.method, r.iterations, r.scaled, r.unscaled}; }

void print_table(const std::vector<Row>& rows) {
    std::printf("%-6s %-10s %-12s %10s %12s %18s\n", "stat", "mode", "algorithm", "iterations", "scaled", "unscaled");
    for (const Row& r : rows) {
        std::printf("%-6s %-10s %-12s %10d %12.6g %18.2f\n", r.statistic.c_str(), r.mode.c_str(),
                    r.algorithm.c_str(), r.iterations, r.scaled, r.unscaled);
    }
}

json row_json(const Row& r) {
    return json{{"statistic", r.statistic}, {"mode", r.mode},     {"algorithm", r.algorithm},
                {"iterations", r.iterations}, {"scaled", r.scaled}, {"unscaled", r.unscaled}};
}

struct Marker {
    std::string name;
    double scaled;
};

void write_plot_data(const std::string& path, const Inputs& in, const std::vector<Marker>& markers) {
    std::string out = "bin,unscaled,probability,markers\n";
    char buf[128];
    const long long last = static_cast<long long>(in.dist.size()) - 1;
    for (std::size_t i = 0; i < in.dist.size(); ++i) {
        std::string tags;
        for (const Marker& m : markers) {
            const long long b = std::clamp(std::llround(m.scaled), 0LL, last);
            if (b == static_cast<long long>(i)) tags += (tags.empty() ? "" : ";") + m.name;
        }
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,", i, unscale(static_cast<double>(i), in.map),
                      in.dist.probs[i]);
        out += buf + tags + "\n";
    }
    emit(path, out);
}

EstimationProblem problem_for(const std::string& stat, const Inputs& in, const RiskConfig& cfg, long long threshold) {
    if (stat == "E") return expectation_problem(in.dist, cfg.c);
    if (stat == "cdf" || stat == "var") return cdf_problem(in.dist, threshold, cfg.comparator);
    CvarObjective obj;
    obj.threshold = threshold;
    obj.tail = cfg.tail;
    obj.n = in.dist.num_qubits();
    obj.mode = cfg.ramp;
    obj.c = cfg.c;
    obj.comparator = cfg.comparator;
    return cvar_problem(in.dist, obj);
}

int cmd_estimate(const Common& common, const EstimateArgs& e) {
    const Inputs in = load_inputs(e);
    const RiskConfig cfg = risk_config(common, e, e.method);
    const long long last = static_cast<long long>(in.dist.size()) - 1;
    if (e.statistic == "cdf" && (e.level < 0 || e.level > last)) usage_error("cdf needs --level in [0, N-1]");

    const ClassicalRisk oracle = classical_oracle(in.dist, e.alpha);
    const RiskReport r = guarded(kEstimation, [&] {
        if (e.statistic == "E") return expected_value(in.dist, in.map, cfg);
        if (e.statistic == "cdf") return cdf_report(in.dist, in.map, e.level, cfg);
        if (e.statistic == "var") return value_at_risk(in.dist, in.map, e.alpha, cfg);
        return conditional_value_at_risk(in.dist, in.map, e.alpha, cfg);
    });

    std::vector<Row> rows;
    if (e.statistic == "E") rows.push_back(exact_row("E", oracle.expected, in.map));
    if (e.statistic == "cdf") rows.push_back(Row{"CDF", "classical", "Exact value", 0, r.exact_scaled, r.exact_scaled});
    if (e.statistic == "var") rows.push_back(exact_row("VaR", static_cast<double>(oracle.var), in.map));
    if (e.statistic == "cvar") rows.push_back(exact_row("CVaR", r.exact_scaled, in.map));
    rows.push_back(report_row(r));
    print_table(rows);
    if (r.flagged) std::fprintf(stderr, "qrisk: warning: result flagged%s%s\n", r.note.empty() ? "" : ": ", r.note.c_str());

    if (!e.emit_circuit.empty()) {
        const long long threshold = e.statistic == "cdf" ? e.level : r.threshold;
        const EstimationProblem p = guarded(kEstimation, [&] { return problem_for(e.statistic, in, cfg, threshold); });
        emit(e.emit_circuit, to_text(p.state_prep));
    }
    if (!e.plot_data.empty()) {
        std::vector<Marker> markers = {{r.statistic + "_exact", r.exact_scaled}, {r.statistic, r.scaled}};
        if (e.statistic == "cdf") markers.clear();
        write_plot_data(e.plot_data, in, markers);
    }

    json rec{{"command", "estimate"},
             {"statistic", e.statistic},
             {"config", config_record(common, e, in)},
             {"method", r.method},
             {"report", to_json(r)},
             {"rows", json::array()}};
    for (const Row& row : rows) rec["rows"].push_back(row_json(row));
    if (common.output.empty()) {
        std::cout << dump(rec);
    } else {
        emit(common.output, dump(rec));
    }
    return kOk;
}

int cmd_compare(const Common& common, const EstimateArgs& e) {
    const Inputs in = load_inputs(e);
    std::vector<std::string> methods;
    {
        std::stringstream ss(e.methods);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) methods.push_back(item);
        }
    }
    if (methods.empty()) usage_error("--methods is empty");
    std::vector<RiskConfig> configs;
    for (const auto& m : methods) configs.push_back(risk_config(common, e, m));

    const ClassicalRisk oracle = classical_oracle(in.dist, e.alpha);
    const double exact_cvar = e.tail == "lower" ? oracle.cvar_lower : oracle.cvar_upper;
    std::vector<Row> rows = {exact_row("E", oracle.expected, in.map),
                             exact_row("VaR", static_cast<double>(oracle.var), in.map),
                             exact_row("CVaR", exact_cvar, in.map)};
    std::vector<Marker> markers = {{"E_exact", oracle.expected},
                                   {"VaR_exact", static_cast<double>(oracle.var)},
                                   {"CVaR_exact", exact_cvar}};
    json reports = json::array();
    for (const RiskConfig& cfg : configs) {
        const auto [ev, var, cvar] = guarded(kEstimation, [&] {
            return std::make_tuple(expected_value(in.dist, in.map, cfg), value_at_risk(in.dist, in.map, e.alpha, cfg),
                                   conditional_value_at_risk(in.dist, in.map, e.alpha, cfg));
        });
        for (const RiskReport* r : {&ev, &var, &cvar}) {
            rows.push_back(report_row(*r));
            reports.push_back(to_json(*r));
            markers.push_back({r->statistic + ":" + r->method, r->scaled});
        }
    }
    print_table(rows);
    if (!e.plot_data.empty()) write_plot_data(e.plot_data, in, markers);

    json rec{{"command", "compare"}, {"config", config_record(common, e, in)}, {"rows", json::array()}, {"reports", reports}};
    for (const Row& row : rows) rec["rows"].push_back(row_json(row));
    if (common.output.empty()) {
        std::cout << dump(rec);
    } else {
        emit(common.output, dump(rec));
    }
    return kOk;
}

int cmd_compile(const Common& common, const CompileArgs& a) {
    if (a.input.empty()) usage_error("compile needs --input");
    if (a.depth < 1) usage_error("--depth must be >= 1");
    if (a.span < 1) usage_error("--span must be >= 1");
    const std::string text = guarded(kIo, [&] { return read_file(a.input); });
    const Circuit c = guarded(kIo, [&] { return from_text(text); });
    if (!c.is_pure()) usage_error("compile needs a circuit without measurements or resets");

    AqcConfig aqc;
    aqc.depth = a.depth;
    aqc.seed = common.seed;
    aqc.layout = a.layout == "sequ" ? Layout::Sequ : Layout::Spin;
    aqc.connectivity = a.connectivity == "line" ? Connectivity::Line : Connectivity::Full;

    Circuit out;
    CompileReport report;
    if (c.empty()) {
        // Nothing to approximate: identity passthrough.
        out = c;
        report.distance = 0.0;
        report.before = metrics(c);
        report.after = metrics(c);
    } else if (a.kind == "aqc") {
        if (a.restarts > 0) aqc.restarts = a.restarts;
        if (a.max_iterations > 0) aqc.max_iterations = a.max_iterations;
        guarded(kUsage, [&] {
            aqc.validate();
            return 0;
        });
        const AqcResult r = guarded(kCompile, [&] {
            const Circuit basis = decompose_to_basis(c);
            if (c.num_qubits() > 10) throw CompileError("AQC supports at most 10 qubits; use paqc");
            AqcResult res = aqc_compile(unitary_of(basis), aqc);
            res.report.before = metrics(basis);
            return res;
        });
        out = r.circuit;
        report = r.report;
    } else {
        PaqcConfig p;
        p.m = a.span;
        p.block.depth = a.depth;
        p.block.seed = common.seed;
        p.block.layout = aqc.layout;
        p.block.connectivity = aqc.connectivity;
        if (a.restarts > 0) p.block.restarts = a.restarts;
        if (a.max_iterations > 0) p.block.max_iterations = a.max_iterations;
        p.policy = a.wide == "passthrough" ? WideGatePolicy::Passthrough
                   : a.wide == "ladder"    ? WideGatePolicy::Ladder
                                           : WideGatePolicy::Error;
        guarded(kUsage, [&] {
            p.block.validate();
            return 0;
        });
        const PaqcResult r = guarded(kCompile, [&] { return paqc_compile(c, p); });
        out = r.circuit;
        report = r.report;
    }

    if (!common.output.empty()) emit(common.output, to_text(out));
    std::printf("%s: cnot %zu -> %zu, depth %zu -> %zu", a.kind.c_str(), report.before.cnot_count,
                report.after.cnot_count, report.before.depth, report.after.depth);
    if (report.distance >= 0) std::printf(", distance %.6g", report.distance);
    if (!report.blocks.empty()) std::printf(", blocks %zu", report.blocks.size());
    std::printf("\n");
    json rec = to_json(report);
    rec["command"] = "compile";
    rec["kind"] = a.kind;
    rec["width"] = c.num_qubits();
    if (a.kind == "paqc") rec["m"] = a.span;
    if (a.report.empty()) {
        std::cout << dump(rec);
    } else {
        emit(a.report, dump(rec));
    }
    return kOk;
}

void add_estimate_options(CLI::App* sub, EstimateArgs& e) {
    sub->add_option("--dist", e.dist, "distribution CSV (index,probability)");
    sub->add_option("--scenarios", e.scenarios, "scenario CSV (delta_gm), binned with --n");
    sub->add_option("--n", e.n, "bin qubits when reading scenarios");
    sub->add_option("--m1", e.m1, "currency value of bin 0 (with --dist)");
    sub->add_option("--m2", e.m2, "upper currency bound (with --dist)");
    sub->add_option("--m", e.m, "QAE/DAE binary digits");
    sub->add_option("--epsilon", e.epsilon, "IAE target half-width");
    sub->add_option("--confidence", e.confidence, "IAE confidence level 1 - alpha");
    sub->add_option("--alpha", e.alpha, "risk level: VaR is the smallest l with CDF(l) >= 1 - alpha");
    sub->add_option("--c", e.c, "objective scaling constant");
    sub->add_option("--tail", e.tail, "CVaR tail")->check(CLI::IsMember({"upper", "lower"}));
    sub->add_option("--ramp", e.ramp, "CVaR ramp encoding")->check(CLI::IsMember({"exact", "linear"}));
    sub->add_option("--comparator", e.comparator, "comparator build")->check(CLI::IsMember({"oracle", "decomposed"}));
    sub->add_option("--plot-data", e.plot_data, "write bin,unscaled,probability,markers CSV");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qrisk: amplitude-estimation risk workbench"};
    app.require_subcommand(1);

    Common common;
    GenerateArgs gen;
    BinArgs bin;
    EstimateArgs est;
    CompileArgs comp;

    CLI::App* g = app.add_subcommand("generate", "simulate delta-gross-margin scenarios");
    add_common(g, common);
    g->add_option("--samples", gen.samples, "number of scenarios");
    g->add_option("--stations", gen.stations);
    g->add_option("--days", gen.days);
    g->add_option("--asp", gen.asp, "comma-separated sale prices per station");
    g->add_option("--beta", gen.beta, "comma-separated volume slopes per station");
    g->add_option("--t-ref", gen.market.t_ref);
    g->add_option("--season-mean", gen.market.season_mean);
    g->add_option("--season-amplitude", gen.market.season_amplitude);
    g->add_option("--season-peak-day", gen.market.season_peak_day);
    g->add_option("--kappa-t", gen.market.kappa_t);
    g->add_option("--sigma-t", gen.market.sigma_t);
    g->add_option("--kappa-g", gen.market.kappa_g);
    g->add_option("--mu-g", gen.market.mu_g);
    g->add_option("--sigma-g", gen.market.sigma_g);
    g->add_option("--rho", gen.market.rho);

    CLI::App* b = app.add_subcommand("bin", "bin scenarios into a 2^n distribution");
    add_common(b, common);
    b->add_option("--scenarios", bin.scenarios, "scenario CSV");
    b->add_option("--n", bin.n, "bin qubits");
    b->add_option("--record", bin.record, "JSON record with M1, M2 and counts");

    CLI::App* e = app.add_subcommand("estimate", "estimate E, cdf, var or cvar");
    add_common(e, common);
    e->add_option("statistic", est.statistic, "E, cdf, var or cvar")
        ->required()
        ->check(CLI::IsMember({"E", "cdf", "var", "cvar"}));
    add_estimate_options(e, est);
    e->add_option("--method", est.method, "qae, iae or dae");
    e->add_option("--level", est.level, "cdf threshold bin");
    e->add_option("--emit-circuit", est.emit_circuit, "write the state-preparation circuit");

    CLI::App* c = app.add_subcommand("compile", "approximate a circuit with aqc or paqc");
    add_common(c, common);
    c->add_option("kind", comp.kind, "aqc or paqc")->required()->check(CLI::IsMember({"aqc", "paqc"}));
    c->add_option("-i,--input", comp.input, "circuit text file");
    c->add_option("--report", comp.report, "JSON compile report path");
    c->add_option("--depth", comp.depth, "CX units per compiled unitary");
    c->add_option("--span", comp.span, "pAQC block span m");
    c->add_option("--restarts", comp.restarts);
    c->add_option("--max-iterations", comp.max_iterations);
    c->add_option("--layout", comp.layout)->check(CLI::IsMember({"spin", "sequ"}));
    c->add_option("--connectivity", comp.connectivity)->check(CLI::IsMember({"full", "line"}));
    c->add_option("--wide", comp.wide, "gates wider than m: error, passthrough or ladder")
        ->check(CLI::IsMember({"error", "passthrough", "ladder"}));

    CLI::App* cmp = app.add_subcommand("compare", "exact oracle plus QAE, IAE and DAE rows");
    add_common(cmp, common);
    add_estimate_options(cmp, est);
    cmp->add_option("--methods", est.methods, "comma-separated methods");

    try {
        apply_config(app, argc, argv);
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& err) {
            const int rc = app.exit(err);
            return rc == 0 ? kOk : kUsage;
        }
        if (g->parsed()) return cmd_generate(common, gen);
        if (b->parsed()) return cmd_bin(common, bin);
        if (e->parsed()) return cmd_estimate(common, est);
        if (c->parsed()) return cmd_compile(common, comp);
        if (cmp->parsed()) return cmd_compare(common, est);
    } catch (const ExitError& err) {
        std::fprintf(stderr, "qrisk: error: %s\n", err.message.c_str());
        return err.code;
    }
    return kUsage;
}

/*
 * Copyright 2026 The roofline-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// roofline-lab command line. Exit codes: 0 ok, 1 validation failure, 2 parse or usage error.

#include "rlab/config_io.hpp"
#include "rlab/mapping_engine.hpp"
#include "rlab/oracle.hpp"
#include "rlab/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace rlab;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kParse = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Inputs {
    std::vector<std::string> scenarios;
    std::string arch, workload, mapping;
    std::string out_dir;
    std::string format = "text";
    std::string overlap;
    int ai_ref_level = -1;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool many) {
    auto* s = cmd->add_option("--scenario", in.scenarios, "scenario file");
    if (!many) s->expected(0, 1);
    cmd->add_option("--arch", in.arch, "architecture file");
    cmd->add_option("--workload", in.workload, "workload file");
    cmd->add_option("--mapping", in.mapping, "mapping file");
    cmd->add_option("--overlap", in.overlap, "override latency overlap")->check(CLI::IsMember({"overlapped", "serialized"}));
    cmd->add_option("--ai-ref-level", in.ai_ref_level, "reference level for AI (1-based; 0 = L2 when present)")
        ->check(CLI::NonNegativeNumber);
}

std::vector<Scenario> collect(const Inputs& in) {
    std::vector<Scenario> out;
    for (const auto& p : in.scenarios) out.push_back(load_scenario(p));
    const bool triple = !in.arch.empty() || !in.workload.empty() || !in.mapping.empty();
    if (triple) {
        if (in.arch.empty() || in.workload.empty() || in.mapping.empty()) {
            throw UsageError("--arch, --workload and --mapping must be given together");
        }
        out.push_back(make_scenario(in.arch, in.workload, in.mapping, fs::path(in.workload).stem().string()));
    }
    if (out.empty()) throw UsageError("give --scenario or --arch/--workload/--mapping");
    for (auto& s : out) {
        if (!in.overlap.empty()) s.overlap = in.overlap == "serialized" ? OverlapMode::serialized : OverlapMode::overlapped;
        if (in.ai_ref_level >= 0) s.reference_level = in.ai_ref_level;
    }
    return out;
}

void write(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw std::runtime_error("cannot write " + path.string());
}

fs::path out_dir(const Inputs& in) {
    const fs::path d = in.out_dir.empty() ? fs::path(".") : fs::path(in.out_dir);
    fs::create_directories(d);
    return d;
}

std::string slug(const std::string& label) {
    std::string s;
    for (char c : label) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return s.empty() ? "scenario" : s;
}

void emit(const std::vector<ScenarioReport>& reports, const Inputs& in, bool compare) {
    if (in.format == "text") {
        std::string text;
        if (compare) text = compare_text(reports);
        for (const auto& r : reports) text += (text.empty() ? "" : "\n") + text_report(r);
        std::cout << text;
        if (!in.out_dir.empty()) write(out_dir(in) / "report.txt", text);
    } else if (in.format == "csv") {
        if (in.out_dir.empty()) {
            std::cout << summary_csv(reports);
            return;
        }
        const auto d = out_dir(in);
        write(d / "summary.csv", summary_csv(reports));
        write(d / "traffic.csv", traffic_csv(reports));
        for (const auto& r : reports) {
            write(d / (slug(r.label) + "_throughput.csv"), curve_csv(r.throughput));
            write(d / (slug(r.label) + "_energy.csv"), curve_csv(r.energy));
        }
        std::cout << "wrote CSV files to " << d.string() << "\n";
    } else {
        const auto d = out_dir(in);
        emit_svg(throughput_chart(reports), d / "throughput.svg");
        emit_svg(energy_chart(reports), d / "energy.svg");
        std::cout << "wrote " << (d / "throughput.svg").string() << " and " << (d / "energy.svg").string() << "\n";
    }
}

std::vector<ScenarioReport> run_all(const std::vector<Scenario>& scenarios) {
    std::vector<ScenarioReport> out;
    for (const auto& s : scenarios) out.push_back(run_scenario(resolve(s)));
    return out;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used == 0 || used != item.size()) throw UsageError("--values: not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--values is empty");
    return out;
}

int validate_cmd(const Inputs& in) {
    bool any = false;
    int status = kOk;
    auto report = [&](const std::string& what, const std::vector<Violation>& v) {
        if (v.empty()) {
            std::cout << what << ": ok\n";
            return;
        }
        status = kInvalid;
        for (const auto& x : v) std::cout << what << ": " << to_string(x.kind) << " " << x.field << ": " << x.message << "\n";
    };
    if (!in.arch.empty()) {
        load_arch(in.arch);
        std::cout << in.arch << ": ok\n";
        any = true;
    }
    if (!in.workload.empty()) {
        load_workload(in.workload);
        std::cout << in.workload << ": ok\n";
        any = true;
    }
    if (!in.mapping.empty()) {
        load_mapping(in.mapping);
        any = true;
        if (in.arch.empty() || in.workload.empty()) {
            std::cout << in.mapping << ": parsed (give --arch and --workload to check it)\n";
        } else {
            report(in.mapping, validate(load_arch(in.arch), load_workload(in.workload), load_mapping(in.mapping)));
        }
    }
    for (const auto& p : in.scenarios) {
        any = true;
        try {
            const auto rs = resolve(load_scenario(p));
            report(p, rs.mapping ? validate(rs.arch, *rs.workload, *rs.mapping) : std::vector<Violation>{});
        } catch (const InvalidMapping& e) {
            report(p, e.violations());
        }
    }
    if (!any) throw UsageError("nothing to validate");
    return status;
}

int oracle_cmd(const Inputs& in, const std::string& trace_path, int64_t cap) {
    auto scenarios = collect(in);
    int status = kOk;
    for (const auto& s : scenarios) {
        const auto rs = resolve(s);
        if (!rs.mapping) throw UsageError("oracle-check needs a workload and mapping (" + s.label + ")");
        const auto& arch = rs.arch;
        const auto& wl = *rs.workload;
        const auto& map = *rs.mapping;

        EnumerationOptions eo;
        eo.iteration_cap = cap;
        eo.record_events = !trace_path.empty();
        const auto trace = enumerate_accesses(arch, wl, map, eo);
        const auto profile = count_accesses(arch, wl, map);

        std::cout << "scenario: " << s.label << "  (" << trace.steps << " steps, " << trace.iterations
                  << " iterations)\n";
        bool match = true;
        for (size_t l = 0; l < arch.levels.size(); ++l) {
            for (const auto& t : profile.levels[l].operands) {
                const auto& c = trace.count(static_cast<int>(l + 1), t.operand);
                const bool ok = c.events == t.fetch_events * t.instances &&
                                c.partial_reads == t.partial_sum_reads * t.instances && c.elements == t.elements_moved &&
                                c.bytes == t.bytes_moved;
                match = match && ok;
                std::cout << "  " << arch.levels[l].name << " " << t.operand << ": analytic " << t.elements_moved
                          << " elements, enumerated " << c.elements << (ok ? "  match" : "  MISMATCH") << "\n";
            }
        }
        const OverlapMode mode = rs.options.overlap.value_or(arch.latency_overlap);
        const auto sim = simulate_cycles(arch, trace.tiles, trace.ops_per_cycle_per_step, mode,
                                         rs.options.bandwidth_utilization);
        const auto analytic = analyze(arch, wl, map, rs.options);
        std::cout << "  simulated cycles: " << sim.cycles << "  analytic cycles: " << analytic.latency.cycles << " ("
                  << to_string(mode) << ")\n";
        if (!match) status = kInvalid;
        if (!trace_path.empty()) {
            fs::path p = trace_path;
            if (scenarios.size() > 1) p = p.parent_path() / (p.stem().string() + "_" + slug(s.label) + p.extension().string());
            std::ofstream out(p, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + p.string());
            write_trace(out, trace, arch);
        }
    }
    std::cout << (status == kOk ? "oracle-check: all counts match\n" : "oracle-check: counts differ\n");
    return status;
}

void print_violations(const std::vector<Violation>& v) {
    for (const auto& x : v) std::cerr << "  " << to_string(x.kind) << " " << x.field << ": " << x.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"roofline-lab: roofline models for ML accelerators"};
    app.require_subcommand(1);
    app.footer("ROOFLINE_LAB_SEED is reserved and has no effect; every result is deterministic.");

    Inputs in;
    std::string param, values, trace_path;
    int64_t cap = kDefaultIterationCap;

    auto* analyze = app.add_subcommand("analyze", "analyze one or more scenarios");
    add_inputs(analyze, in, true);
    analyze->add_option("--out-dir", in.out_dir, "directory for CSV/SVG output");
    analyze->add_option("--format", in.format, "output format")->check(CLI::IsMember({"text", "csv", "svg"}));

    auto* compare = app.add_subcommand("compare", "compare several scenarios side by side");
    add_inputs(compare, in, true);
    compare->add_option("--out-dir", in.out_dir, "directory for CSV/SVG output");
    compare->add_option("--format", in.format, "output format")->check(CLI::IsMember({"text", "csv", "svg"}));

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter of a scenario");
    add_inputs(sweep, in, false);
    sweep->add_option("--param", param, "A_op, f_clk, E_op, B_L<i>, E_L<i>, precision[.op], density[.op], P_R, array.<axis>")
        ->required();
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--out-dir", in.out_dir, "directory for sweep.csv");

    auto* validate_sub = app.add_subcommand("validate", "parse and validate input files");
    validate_sub->add_option("--scenario", in.scenarios, "scenario file");
    validate_sub->add_option("--arch", in.arch, "architecture file");
    validate_sub->add_option("--workload", in.workload, "workload file");
    validate_sub->add_option("--mapping", in.mapping, "mapping file");

    auto* oracle = app.add_subcommand("oracle-check", "compare analytic counts with brute-force enumeration");
    add_inputs(oracle, in, true);
    oracle->add_option("--trace", trace_path, "write per-transfer trace CSV");
    oracle->add_option("--cap", cap, "maximum enumerated iterations")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        if (analyze->parsed() || compare->parsed()) {
            const auto reports = run_all(collect(in));
            emit(reports, in, compare->parsed());
            return kOk;
        }
        if (sweep->parsed()) {
            if (!is_sweepable(param)) throw UsageError("unknown sweep parameter '" + param + "'");
            const auto scenarios = collect(in);
            if (scenarios.size() != 1) throw UsageError("sweep takes exactly one scenario");
            const auto csv = run_sweep(scenarios.front(), param, parse_values(values));
            if (in.out_dir.empty()) {
                std::cout << csv;
            } else {
                write(out_dir(in) / "sweep.csv", csv);
                std::cout << "wrote " << (out_dir(in) / "sweep.csv").string() << "\n";
            }
            return kOk;
        }
        if (validate_sub->parsed()) return validate_cmd(in);
        if (oracle->parsed()) return oracle_cmd(in, trace_path, cap);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kParse;
    } catch (const ConfigError& e) {
        std::cerr << (e.kind() == ConfigError::Kind::syntax ? "parse error: " : "invalid: ") << e.what() << "\n";
        print_violations(e.violations());
        return e.kind() == ConfigError::Kind::syntax ? kParse : kInvalid;
    } catch (const InvalidMapping& e) {
        std::cerr << "invalid mapping:\n";
        print_violations(e.violations());
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kOk;
}

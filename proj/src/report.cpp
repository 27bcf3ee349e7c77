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

#include "rlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rlab {

namespace {

std::string g(double v, const char* f = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string c(double v) { return g(v, "%.10g"); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
}

std::string pad(const std::string& s, size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

}  // namespace

ScenarioReport run_scenario(const ResolvedScenario& rs, const SamplingOptions& sampling) {
    ScenarioReport r;
    r.label = rs.label;
    r.arch = rs.arch;
    if (rs.profile) {
        r.result = analyze_profile(rs.arch, *rs.profile, rs.options);
    } else {
        r.mapped = true;
        r.result = analyze(rs.arch, *rs.workload, *rs.mapping, rs.options);
    }
    SamplingOptions s = sampling;
    const double ai = r.result.point.ai_ref;
    if (std::isfinite(ai) && ai > 0) {
        s.ai_min = std::min(s.ai_min, ai / 10);
        s.ai_max = std::max(s.ai_max, ai * 10);
    }
    r.throughput = throughput_roofline(rs.arch, r.result.ai_ratios, s);
    r.energy = energy_roofline(rs.arch, r.result.ai_ratios, s);
    r.throughput.label = r.energy.label = rs.label;
    r.knee = throughput_knee(rs.arch, r.result.ai_ratios);
    return r;
}

std::string text_report(const ScenarioReport& r) {
    const auto& res = r.result;
    const auto& a = r.arch;
    std::ostringstream os;
    os << "scenario: " << r.label << "  (architecture " << a.name << ", " << to_string(res.latency.mode) << ")\n";
    os << "ops: " << g(res.profile.op_count) << "   peak A_op: " << g(a.peak_ops_per_cycle()) << " ops/cycle at "
       << g(a.clock_hz) << " Hz\n";
    os << "reference level: L" << res.reference_level << "   AI_ref: " << g(res.point.ai_ref) << " ops/byte\n\n";

    os << pad("level", 8) << pad("bytes", 14) << pad("AI(ops/B)", 14) << pad("AI/AI_ref", 12) << pad("cycles", 12)
       << "energy(pJ)\n";
    for (size_t i = 0; i < a.levels.size(); ++i) {
        const double bytes = res.profile.levels[i].total_bytes;
        os << pad(a.levels[i].name, 8) << pad(g(bytes), 14) << pad(g(res.ai[i]), 14) << pad(g(res.ai_ratios[i]), 12)
           << pad(g(res.latency.level_cycles[i]), 12) << g(bytes * a.levels[i].energy_per_byte) << "\n";
    }
    os << pad("compute", 8) << pad("-", 14) << pad("-", 14) << pad("-", 12) << pad(g(res.latency.compute_cycles), 12)
       << g(res.profile.op_count * a.array.energy_per_op) << "\n";

    if (r.mapped) {
        os << "\n" << pad("level", 8) << pad("operand", 10) << pad("tiles", 10) << pad("reads", 10)
           << pad("tile elems", 12) << pad("bytes", 14) << "stationary\n";
        for (const auto& l : res.profile.levels) {
            for (const auto& t : l.operands) {
                const bool st = l.stationary_operand && *l.stationary_operand == t.operand;
                os << pad(l.level, 8) << pad(t.operand, 10) << pad(std::to_string(t.fetch_events * t.instances), 10)
                   << pad(std::to_string(t.partial_sum_reads * t.instances), 10)
                   << pad(std::to_string(t.elements_per_event), 12) << pad(g(t.bytes_moved), 14) << (st ? "yes" : "")
                   << "\n";
            }
        }
    }

    const auto& u = res.utilization;
    os << "\nutilization: spatial " << g(u.spatial) << "  temporal " << g(u.temporal) << "  core " << g(u.core)
       << "  total " << g(u.total) << "\n";
    if (u.reload_cycles > 0) os << "array reload stalls: " << g(u.reload_cycles) << " cycles\n";
    os << "E_task: " << g(res.energy_pj) << " pJ\n";
    os << "L_task: " << g(res.latency.cycles) << " cycles (" << g(res.latency.seconds) << " s), limiter "
       << res.latency.limiter << "\n";
    os << "attained: " << g(res.point.attained_ops_per_cycle) << " ops/cycle (" << g(res.point.attained_ops_per_second)
       << " ops/s), " << g(res.point.attained_ops_per_pj) << " ops/pJ (TOPS/W = ops/pJ)\n";
    os << "throughput ceiling at AI_ref: " << g(res.point.throughput_ceiling) << " ops/cycle, "
       << res.point.throughput_bound << "\n";
    os << "energy ceiling at AI_ref: " << g(res.point.energy_ceiling) << " ops/pJ, " << res.point.energy_bound << "\n";
    if (r.knee) os << "throughput knee: AI_ref = " << g(r.knee->ai) << " (" << r.knee->label << ")\n";
    os << "energy knees:";
    for (const auto& k : r.energy.knees) os << " " << k.label << "@" << g(k.ai);
    os << "\nbottleneck: " << res.bottleneck << "\n";
    return os.str();
}

std::string summary_csv(const std::vector<ScenarioReport>& reports) {
    std::ostringstream os;
    os << "scenario,ops,reference_level,ai_ref,energy_pj,cycles,seconds,limiter,attained_ops_per_cycle,"
          "attained_ops_per_pj,throughput_ceiling,energy_ceiling,throughput_bound,energy_bound,spatial_util,"
          "temporal_util,core_util,total_util,knee_ai\n";
    for (const auto& r : reports) {
        const auto& res = r.result;
        os << csv_field(r.label) << ',' << c(res.profile.op_count) << ',' << res.reference_level << ','
           << c(res.point.ai_ref) << ',' << c(res.energy_pj) << ',' << c(res.latency.cycles) << ','
           << c(res.latency.seconds) << ',' << csv_field(res.latency.limiter) << ','
           << c(res.point.attained_ops_per_cycle) << ',' << c(res.point.attained_ops_per_pj) << ','
           << c(res.point.throughput_ceiling) << ',' << c(res.point.energy_ceiling) << ','
           << csv_field(res.point.throughput_bound) << ',' << csv_field(res.point.energy_bound) << ','
           << c(res.utilization.spatial) << ',' << c(res.utilization.temporal) << ',' << c(res.utilization.core) << ','
           << c(res.utilization.total) << ',' << (r.knee ? c(r.knee->ai) : "") << '\n';
    }
    return os.str();
}

std::string traffic_csv(const std::vector<ScenarioReport>& reports) {
    std::ostringstream os;
    os << "scenario,level,operand,tiles,partial_reads,elements,bytes,level_bytes,ai\n";
    for (const auto& r : reports) {
        const auto& res = r.result;
        for (size_t i = 0; i < res.profile.levels.size(); ++i) {
            const auto& l = res.profile.levels[i];
            if (l.operands.empty()) {
                os << csv_field(r.label) << ',' << csv_field(r.arch.levels[i].name) << ",*,,,," << c(l.total_bytes)
                   << ',' << c(l.total_bytes) << ',' << c(res.ai[i]) << '\n';
            }
            for (const auto& t : l.operands) {
                os << csv_field(r.label) << ',' << csv_field(l.level) << ',' << csv_field(t.operand) << ','
                   << t.fetch_events * t.instances << ',' << t.partial_sum_reads * t.instances << ','
                   << t.elements_moved << ',' << c(t.bytes_moved) << ',' << c(l.total_bytes) << ',' << c(res.ai[i])
                   << '\n';
            }
        }
    }
    return os.str();
}

std::string curve_csv(const RooflineCurve& curve) {
    std::ostringstream os;
    os << "ai," << (curve.kind == RooflineKind::throughput ? "ops_per_cycle" : "ops_per_pj") << ",limiter\n";
    for (const auto& s : curve.samples) os << c(s.ai) << ',' << c(s.value) << ',' << csv_field(s.limiter) << '\n';
    return os.str();
}

std::string compare_text(const std::vector<ScenarioReport>& reports) {
    std::ostringstream os;
    os << pad("scenario", 22) << pad("AI_ref", 12) << pad("ops/cycle", 12) << pad("ceiling", 12) << pad("ops/pJ", 12)
       << pad("E_task(pJ)", 14) << pad("cycles", 12) << "bound\n";
    for (const auto& r : reports) {
        const auto& p = r.result.point;
        os << pad(r.label, 22) << pad(g(p.ai_ref), 12) << pad(g(p.attained_ops_per_cycle), 12)
           << pad(g(p.throughput_ceiling), 12) << pad(g(p.attained_ops_per_pj), 12) << pad(g(r.result.energy_pj), 14)
           << pad(g(r.result.latency.cycles), 12) << p.throughput_bound << "\n";
    }
    return os.str();
}

Chart throughput_chart(const std::vector<ScenarioReport>& reports) {
    Chart ch;
    ch.title = "throughput roofline";
    ch.y_label = "attainable performance (ops/cycle)";
    for (const auto& r : reports) {
        ch.curves.push_back(r.throughput);
        ch.points.push_back({r.result.point.ai_ref, r.result.point.attained_ops_per_cycle, r.label});
    }
    return ch;
}

Chart energy_chart(const std::vector<ScenarioReport>& reports) {
    Chart ch;
    ch.title = "energy roofline";
    ch.y_label = "energy efficiency (ops/pJ = TOPS/W)";
    for (const auto& r : reports) {
        ch.curves.push_back(r.energy);
        ch.points.push_back({r.result.point.ai_ref, r.result.point.attained_ops_per_pj, r.label});
    }
    return ch;
}

// ============================================================================
// Sweeps
// ============================================================================

namespace {

bool level_param(const std::string& p, char kind, int& index) {
    if (p.size() < 4 || p[0] != kind || p.compare(1, 2, "_L") != 0) return false;
    const auto digits = p.substr(3);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return false;
    index = std::stoi(digits);
    return index >= 1;
}

bool prefixed(const std::string& p, const std::string& prefix) {
    return p == prefix || (p.size() > prefix.size() + 1 && p.compare(0, prefix.size() + 1, prefix + ".") == 0);
}

std::string suffix(const std::string& p, const std::string& prefix) {
    return p.size() > prefix.size() ? p.substr(prefix.size() + 1) : "";
}

int as_int(double v, const std::string& what) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument(what + " must be an integer");
    return static_cast<int>(v);
}

// Edits that act on the scenario before resolution.
void edit_scenario(Scenario& s, const std::string& p, double v) {
    if (prefixed(p, "precision")) {
        if (s.profile) throw std::invalid_argument("precision sweeps need a workload");
        const WorkloadSpec wl = load_workload(s.base_dir / s.workload);
        const auto only = suffix(p, "precision");
        QuantConfig* q = nullptr;
        for (auto it = s.transforms.rbegin(); it != s.transforms.rend() && !q; ++it) q = std::get_if<QuantConfig>(&*it);
        if (!q) {
            s.transforms.emplace_back(QuantConfig{});
            q = &std::get<QuantConfig>(s.transforms.back());
        }
        for (const auto& op : wl.operands) {
            if (only.empty() || op.name == only) q->precision_bits[op.name] = as_int(v, "precision");
        }
        if (!only.empty() && !wl.find_operand(only)) throw std::invalid_argument("unknown operand " + only);
    } else if (prefixed(p, "density")) {
        if (s.profile) throw std::invalid_argument("density sweeps need a workload");
        const WorkloadSpec wl = load_workload(s.base_dir / s.workload);
        const auto only = suffix(p, "density");
        SparsityConfig* sp = nullptr;
        for (auto it = s.transforms.rbegin(); it != s.transforms.rend() && !sp; ++it) sp = std::get_if<SparsityConfig>(&*it);
        if (!sp) {
            SparsityConfig fresh;
            fresh.mode = SparsityMode::unstructured;
            s.transforms.emplace_back(fresh);
            sp = &std::get<SparsityConfig>(s.transforms.back());
        }
        for (const auto& op : wl.operands) {
            if (op.role == OperandRole::input && (only.empty() || op.name == only)) sp->density[op.name] = v;
        }
        if (!only.empty() && !wl.find_operand(only)) throw std::invalid_argument("unknown operand " + only);
    } else if (p == "P_R") {
        ImcMacro* m = nullptr;
        for (auto it = s.transforms.rbegin(); it != s.transforms.rend() && !m; ++it) m = std::get_if<ImcMacro>(&*it);
        if (!m) throw std::invalid_argument("P_R sweeps need an imc transform in the scenario");
        m->rows = as_int(v, "P_R");
    }
}

// Edits that act on the resolved architecture.
void edit_arch(ArchSpec& a, const std::string& p, double v) {
    int idx = 0;
    if (p == "A_op") {
        a.array.lanes = v / (a.array.ops_per_mac * static_cast<double>(a.array.pe_count()) * a.cores);
    } else if (p == "f_clk") {
        a.clock_hz = v;
    } else if (p == "E_op") {
        a.array.energy_per_op = v;
    } else if (level_param(p, 'B', idx) || level_param(p, 'E', idx)) {
        if (idx > static_cast<int>(a.levels.size())) throw std::invalid_argument("no memory level L" + std::to_string(idx));
        auto& l = a.levels[static_cast<size_t>(idx - 1)];
        (p[0] == 'B' ? l.bandwidth : l.energy_per_byte) = v;
    } else if (prefixed(p, "array") && p != "array") {
        const auto axis = suffix(p, "array");
        auto it = std::find_if(a.array.dims.begin(), a.array.dims.end(), [&](const ArrayAxis& x) { return x.name == axis; });
        if (it == a.array.dims.end()) throw std::invalid_argument("no array axis " + axis);
        it->size = as_int(v, p);
    }
    auto violations = validate(a);
    if (!violations.empty()) throw InvalidMapping(std::move(violations));
}

}  // namespace

bool is_sweepable(const std::string& p) {
    int idx = 0;
    return p == "A_op" || p == "f_clk" || p == "E_op" || p == "P_R" || level_param(p, 'B', idx) ||
           level_param(p, 'E', idx) || prefixed(p, "precision") || prefixed(p, "density") ||
           (prefixed(p, "array") && p != "array");
}

std::string run_sweep(const Scenario& base, const std::string& parameter, const std::vector<double>& values) {
    if (!is_sweepable(parameter)) {
        throw std::invalid_argument("unknown sweep parameter '" + parameter +
                                    "' (expected A_op, f_clk, E_op, B_L<i>, E_L<i>, precision[.op], density[.op], "
                                    "P_R or array.<axis>)");
    }
    std::ostringstream os;
    os << "parameter,value,status,effective_ops,ai_ref,plateau_ops_per_cycle,knee_ai,throughput_ceiling,"
          "attained_ops_per_cycle,energy_pj,attained_ops_per_pj,cycles,limiter\n";
    for (double v : values) {
        os << csv_field(parameter) << ',' << c(v) << ',';
        try {
            Scenario s = base;
            edit_scenario(s, parameter, v);
            ResolvedScenario rs = resolve(s);
            edit_arch(rs.arch, parameter, v);
            const auto r = run_scenario(rs);
            const auto& res = r.result;
            os << "ok," << c(res.profile.op_count) << ',' << c(res.point.ai_ref) << ','
               << c(r.arch.peak_ops_per_cycle()) << ',' << (r.knee ? c(r.knee->ai) : "") << ','
               << c(res.point.throughput_ceiling) << ',' << c(res.point.attained_ops_per_cycle) << ','
               << c(res.energy_pj) << ',' << c(res.point.attained_ops_per_pj) << ',' << c(res.latency.cycles) << ','
               << csv_field(res.latency.limiter) << '\n';
        } catch (const std::exception& e) {
            os << csv_field(std::string("error: ") + e.what()) << ",,,,,,,,,,\n";
        }
    }
    return os.str();
}

}  // namespace rlab

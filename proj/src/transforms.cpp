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

#include "rlab/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace rlab {

namespace {

[[noreturn]] void throw_violations(const std::vector<Violation>& v) {
    std::string msg;
    for (const auto& x : v) msg += (msg.empty() ? "" : "; ") + x.field + ": " + x.message;
    throw std::invalid_argument(msg);
}

Violation cfg(std::string field, std::string message) {
    return {ViolationKind::workload, std::move(field), std::move(message)};
}

}  // namespace

const char* to_string(ThroughputScaling mode) {
    return mode == ThroughputScaling::linear ? "linear" : "bit-serial-weights";
}

const char* to_string(SparsityMode mode) {
    switch (mode) {
        case SparsityMode::dense: return "dense";
        case SparsityMode::unstructured: return "unstructured";
        case SparsityMode::structured: return "structured";
    }
    return "?";
}

// ============================================================================
// Quantization
// ============================================================================

double packed_bytes_per_element(int bits, int block_size, int block_metadata_bits) {
    return (bits + static_cast<double>(block_metadata_bits) / block_size) / 8.0;
}

std::vector<Violation> validate(const QuantConfig& q) {
    std::vector<Violation> v;
    for (const auto& [name, bits] : q.precision_bits) {
        if (bits < 1) v.push_back(cfg("precision_bits." + name, "must be >= 1"));
    }
    if (q.block_size < 1) v.push_back(cfg("block_size", "must be >= 1"));
    if (q.block_metadata_bits < 0) v.push_back(cfg("block_metadata_bits", "must be >= 0"));
    if (!(q.compute_scaling_exponent >= 1.0)) v.push_back(cfg("compute_scaling_exponent", "must be >= 1"));
    if (q.serial_overhead_cycles < 0) v.push_back(cfg("serial_overhead_cycles", "must be >= 0"));
    if (!(q.fixed_overhead_energy >= 0.0)) v.push_back(cfg("fixed_overhead_energy", "must be >= 0"));
    return v;
}

QuantizedModel apply_quantization(const ArchSpec& arch, const WorkloadSpec& wl, const QuantConfig& q) {
    if (auto v = validate(q); !v.empty()) throw_violations(v);

    QuantizedModel out{arch, wl};
    const int base = arch.base_precision_bits;

    for (const auto& [name, bits] : q.precision_bits) {
        OperandSpec* op = out.workload.find_operand(name);
        if (!op) throw std::invalid_argument("precision_bits." + name + ": unknown operand");
        if (op->role == OperandRole::output) {
            op->accumulator_bits = bits;
        } else {
            if (q.throughput_scaling == ThroughputScaling::bit_serial_weights && name != q.weight_operand &&
                bits < base) {
                throw UnsupportedConfig("bit-serial weights: operand " + name + " at " + std::to_string(bits) +
                                        " bits is below the array's " + std::to_string(base) + "-bit support");
            }
            op->precision_bits = bits;
        }
        op->bytes_per_element = packed_bytes_per_element(bits, q.block_size, q.block_metadata_bits);
    }

    const OperandSpec* w = out.workload.find_operand(q.weight_operand);
    if (!w) throw std::invalid_argument("weight_operand: unknown operand " + q.weight_operand);
    const double wbits = w->precision_bits;

    auto& array = out.arch.array;
    array.energy_per_op *= std::pow(wbits / base, q.compute_scaling_exponent);
    if (q.throughput_scaling == ThroughputScaling::linear) {
        array.lanes *= base / wbits;
    } else {
        array.lanes *= base / (wbits + q.serial_overhead_cycles);
        array.energy_per_op += q.fixed_overhead_energy;
    }
    return out;
}

// ============================================================================
// Sparsity
// ============================================================================

std::vector<Violation> validate(const SparsityConfig& s) {
    std::vector<Violation> v;
    for (const auto& [name, d] : s.density) {
        if (!(d > 0.0 && d <= 1.0)) v.push_back(cfg("density." + name, "must be in (0, 1]"));
        if (s.mode == SparsityMode::structured && d != 1.0 && d != static_cast<double>(s.n) / s.m) {
            v.push_back(cfg("density." + name, "structured mode requires density = N/M"));
        }
    }
    if (s.mode == SparsityMode::structured && !(s.n >= 1 && s.m >= 1 && s.n <= s.m)) {
        v.push_back(cfg("n", "structured mode requires 1 <= N <= M"));
    }
    if (s.index_bits < 0) v.push_back(cfg("index_bits", "must be >= 0"));
    if (!(s.utilization_penalty > 0.0 && s.utilization_penalty <= 1.0)) {
        v.push_back(cfg("utilization_penalty", "must be in (0, 1]"));
    }
    return v;
}

double sparse_bytes_per_element(const SparsityConfig& s, double density, double element_bytes) {
    switch (s.mode) {
        case SparsityMode::dense:
            return element_bytes;
        case SparsityMode::unstructured:
            return density * (element_bytes + s.index_bits / 8.0);
        case SparsityMode::structured: {
            const double meta_bits = s.n * std::ceil(std::log2(static_cast<double>(s.m)));
            return (static_cast<double>(s.n) / s.m) * element_bytes + meta_bits / s.m / 8.0;
        }
    }
    return element_bytes;
}

SparseModel apply_sparsity(const WorkloadSpec& wl, const SparsityConfig& s) {
    if (auto v = validate(s); !v.empty()) throw_violations(v);

    SparseModel out{wl, 0.0, s.utilization_penalty};
    if (s.mode != SparsityMode::dense) {
        for (const auto& [name, d] : s.density) {
            OperandSpec* op = out.workload.find_operand(name);
            if (!op) throw std::invalid_argument("density." + name + ": unknown operand");
            if (op->role == OperandRole::output) {
                throw UnsupportedConfig("density." + name + ": outputs are kept dense");
            }
            if (d == 1.0) continue;
            const double elem = out.workload.bytes_per_element(*op);
            op->density = d;
            op->bytes_per_element = sparse_bytes_per_element(s, d, elem);
        }
    }
    out.effective_ops = out.workload.effective_op_count();
    return out;
}

// ============================================================================
// In-memory compute
// ============================================================================

std::vector<Violation> validate(const ImcMacro& m) {
    std::vector<Violation> v;
    auto arch = [&](std::string f, std::string msg) {
        v.push_back({ViolationKind::architecture, std::move(f), std::move(msg)});
    };
    if (m.rows < 1) arch("rows", "must be >= 1");
    if (m.cols < 1) arch("cols", "must be >= 1");
    if (m.input_bits < 1 || m.input_bits > 30) arch("input_bits", "must be in [1, 30]");
    if (m.weight_bits < 1 || m.weight_bits > 30) arch("weight_bits", "must be in [1, 30]");
    if (!(m.energy_per_column_op >= 0.0)) arch("energy_per_column_op", "must be >= 0");
    if (!(m.adc_overhead_fraction >= 0.0)) arch("adc_overhead_fraction", "must be >= 0");
    if (m.weight_write_rows_per_cycle < 1) arch("weight_write_rows_per_cycle", "must be >= 1");
    return v;
}

DynamicRange imc_dynamic_range(const ImcMacro& m) {
    if (auto v = validate(m); !v.empty()) throw_violations(v);
    const uint64_t per_row = (uint64_t{1} << m.input_bits) + (uint64_t{1} << m.weight_bits) - 1;
    DynamicRange r;
    r.levels = per_row * static_cast<uint64_t>(m.rows);
    r.bits = static_cast<int>(std::bit_width(r.levels - 1));
    return r;
}

ImcArch imc_macro_as_arch(const ImcMacro& m, std::vector<MemoryLevel> levels, double clock_hz) {
    if (auto v = validate(m); !v.empty()) throw_violations(v);
    ImcArch out;
    out.stationary_operand = m.weight_operand;
    auto& a = out.arch;
    a.name = "imc" + std::to_string(m.rows) + "x" + std::to_string(m.cols);
    a.clock_hz = clock_hz;
    a.levels = std::move(levels);
    a.array.dims = {{out.row_axis, m.rows}, {out.col_axis, m.cols}};
    // One column evaluation is rows MACs.
    a.array.energy_per_op = m.energy_per_column_op * (1.0 + m.adc_overhead_fraction) /
                            (static_cast<double>(a.array.ops_per_mac) * static_cast<double>(m.rows));
    const int64_t write_cycles = (m.rows + m.weight_write_rows_per_cycle - 1) / m.weight_write_rows_per_cycle;
    a.array.reload = ArrayReload{m.weight_operand, static_cast<double>(write_cycles), m.reload_overlapped};
    return out;
}

std::vector<Violation> check_imc_mapping(const ImcArch& imc, const WorkloadSpec& wl, const MappingSpec& map) {
    std::vector<Violation> v;
    auto bad = [&](std::string f, std::string msg) {
        v.push_back({ViolationKind::mapping, std::move(f), std::move(msg)});
    };
    const OperandSpec* w = wl.find_operand(imc.stationary_operand);
    if (!w) {
        bad("operands", "no operand named " + imc.stationary_operand);
        return v;
    }
    for (const auto& s : map.spatial) {
        if (!w->is_relevant(s.dim)) bad("spatial." + s.axis, s.dim + " does not index the stored weights");
    }
    const auto& l1 = map.loops_at(1);
    auto inner = std::find_if(l1.begin(), l1.end(), [](const TemporalLoop& t) { return t.trip > 1; });
    if (inner != l1.end() && w->is_relevant(inner->dim)) {
        bad("temporal[0]", "innermost L1 loop " + inner->dim + " indexes the stored weights");
    }
    return v;
}

ImcTradeoff imc_mapping_tradeoff(const std::vector<ModelLayer>& layers, const ImcMacro& macro,
                                 double total_bitcells) {
    if (layers.empty()) throw std::invalid_argument("imc_mapping_tradeoff: at least one layer required");
    double max_ops = 0.0;
    double min_ops = std::numeric_limits<double>::infinity();
    for (const auto& l : layers) {
        if (!(l.weights > 0.0) || !(l.ops_per_weight > 0.0)) {
            throw std::invalid_argument("imc_mapping_tradeoff: weights and ops per weight must be > 0");
        }
        max_ops = std::max(max_ops, l.ops_per_weight);
        min_ops = std::min(min_ops, l.ops_per_weight);
    }

    ImcTradeoff t;
    double weights = 0.0;
    double work = 0.0;
    double cells = 0.0;
    for (const auto& l : layers) {
        const double rep = l.ops_per_weight / min_ops;
        t.replication.push_back(rep);
        weights += l.weights;
        work += l.weights * l.ops_per_weight;
        cells += l.weights * rep;
    }
    t.storage_optimal_compute_utilization = work / (weights * max_ops);
    t.compute_optimal_storage_utilization = weights / cells;
    t.compute_optimal_bitcells = cells * macro.weight_bits;
    t.compute_optimal_fits = t.compute_optimal_bitcells <= total_bitcells;
    return t;
}

double amdahl_bound(double f) {
    if (!(f > 0.0 && f <= 1.0)) throw std::domain_error("amdahl_bound: f must be in (0, 1]");
    return 1.0 / f;
}

}  // namespace rlab

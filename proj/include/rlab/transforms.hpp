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

/**
 * @file transforms.hpp
 * @brief Quantization, sparsity and in-memory-compute passes over the cost model.
 *
 * The passes rewrite an (ArchSpec, WorkloadSpec) pair; the engines then run
 * unchanged on the result.
 */

#pragma once

#include "rlab/core_model.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

/// Raised when a transform is asked for something the hardware model cannot express.
class UnsupportedConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ============================================================================
// Quantization
// ============================================================================

enum class ThroughputScaling { linear, bit_serial_weights };

const char* to_string(ThroughputScaling mode);

struct QuantConfig {
    /// Operand name -> bits. For outputs this sets the accumulator width.
    std::map<std::string, int> precision_bits;
    int block_size = 1;
    int block_metadata_bits = 0;
    double compute_scaling_exponent = 1.0;  ///< alpha in E_op ~ (bits/base)^alpha
    ThroughputScaling throughput_scaling = ThroughputScaling::linear;
    std::string weight_operand = "W";
    /// Bit-serial only: extra cycles per MAC pass (scale/offset handling).
    int serial_overhead_cycles = 0;
    /// Bit-serial only: energy added to every op, in pJ.
    double fixed_overhead_energy = 0.0;

    bool operator==(const QuantConfig&) const = default;
};

struct QuantizedModel {
    ArchSpec arch;
    WorkloadSpec workload;
};

/// (bits + metadata/block) / 8.
double packed_bytes_per_element(int bits, int block_size, int block_metadata_bits);

std::vector<Violation> validate(const QuantConfig& q);

/**
 * Linear mode: the array gains base/N_w lanes per PE. Bit-serial mode: one
 * pass per weight bit, so ops/cycle scales by base / (N_w + overhead).
 * E_op scales by (N_w / base)^alpha in both modes.
 *
 * Throws UnsupportedConfig when bit-serial mode would need a non-weight input
 * narrower than the base precision, std::invalid_argument on bad configs.
 */
QuantizedModel apply_quantization(const ArchSpec& arch, const WorkloadSpec& wl, const QuantConfig& q);

// ============================================================================
// Sparsity
// ============================================================================

enum class SparsityMode { dense, unstructured, structured };

const char* to_string(SparsityMode mode);

struct SparsityConfig {
    SparsityMode mode = SparsityMode::dense;
    std::map<std::string, double> density;  ///< input operands only
    int n = 2;
    int m = 4;
    int index_bits = 32;
    double utilization_penalty = 1.0;  ///< applied to every B_Li

    bool operator==(const SparsityConfig&) const = default;
};

struct SparseModel {
    WorkloadSpec workload;
    double effective_ops = 0.0;
    double bandwidth_utilization = 1.0;
};

std::vector<Violation> validate(const SparsityConfig& s);

/// Storage cost per dense element of a compressed operand.
double sparse_bytes_per_element(const SparsityConfig& s, double density, double element_bytes);

/**
 * Compresses the listed operands. Operands with density 1 stay dense.
 * Throws std::invalid_argument on bad configs.
 */
SparseModel apply_sparsity(const WorkloadSpec& wl, const SparsityConfig& s);

// ============================================================================
// In-memory compute
// ============================================================================

struct ImcMacro {
    int64_t rows = 1;  ///< P_R
    int64_t cols = 1;  ///< P_C
    int input_bits = 1;
    int weight_bits = 1;
    double energy_per_column_op = 0.0;  ///< pJ for one row-parallel column evaluation
    double adc_overhead_fraction = 0.25;
    int64_t weight_write_rows_per_cycle = 1;
    bool reload_overlapped = false;
    std::string weight_operand = "W";

    bool operator==(const ImcMacro&) const = default;
};

std::vector<Violation> validate(const ImcMacro& m);

struct DynamicRange {
    uint64_t levels = 0;
    int bits = 0;
};

/// levels = (2^B_X + 2^B_W - 1) * P_R, bits = ceil(log2(levels)).
DynamicRange imc_dynamic_range(const ImcMacro& m);

struct ImcArch {
    ArchSpec arch;
    std::string row_axis = "rows";
    std::string col_axis = "cols";
    std::string stationary_operand;
};

/// Macro as a compute array on top of the given memory levels.
ImcArch imc_macro_as_arch(const ImcMacro& m, std::vector<MemoryLevel> levels, double clock_hz = 1e9);

/// Mapping rules the macro imposes: weights unrolled on both axes and stationary at L1.
std::vector<Violation> check_imc_mapping(const ImcArch& imc, const WorkloadSpec& wl, const MappingSpec& map);

struct ModelLayer {
    double weights = 0.0;
    double ops_per_weight = 0.0;
};

struct ImcTradeoff {
    double storage_optimal_compute_utilization = 1.0;
    std::vector<double> replication;
    double compute_optimal_storage_utilization = 1.0;
    double compute_optimal_bitcells = 0.0;
    bool compute_optimal_fits = true;
};

/**
 * Storage-optimal: each weight stored once, the array idles while light layers
 * run. Compute-optimal: replicate layer i by ops_i / min(ops) so every weight
 * cell does the same work.
 */
ImcTradeoff imc_mapping_tradeoff(const std::vector<ModelLayer>& layers, const ImcMacro& macro,
                                 double total_bitcells);

/// Speedup bound 1/f for a non-accelerable fraction f in (0, 1].
double amdahl_bound(double f);

}  // namespace rlab

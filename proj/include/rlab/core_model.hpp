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
 * @file core_model.hpp
 * @brief Architecture, workload and mapping descriptions plus structural validation.
 *
 * Units used throughout the library:
 *   - bandwidth: bytes per cycle
 *   - energy: picojoules (per byte for memories, per operation for compute)
 *   - capacity: bytes
 *   - clock: Hz
 *
 * A MAC counts as two operations.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

enum class OverlapMode { overlapped, serialized };
enum class OperandRole { input, output };

const char* to_string(OverlapMode mode);
const char* to_string(OperandRole role);

// ============================================================================
// Architecture
// ============================================================================

struct MemoryLevel {
    std::string name;
    double bandwidth = 0.0;          ///< bytes/cycle
    double energy_per_byte = 0.0;    ///< pJ/byte
    std::optional<double> capacity;  ///< bytes, absent = unbounded
    int level_index = 0;             ///< 1 = closest to compute

    bool operator==(const MemoryLevel&) const = default;
};

struct ArrayAxis {
    std::string name;
    int64_t size = 1;

    bool operator==(const ArrayAxis&) const = default;
};

/// Operand held inside the array whose refill stalls compute (IMC bit cells).
struct ArrayReload {
    std::string operand;
    double cycles_per_tile = 0.0;
    bool overlapped = true;

    bool operator==(const ArrayReload&) const = default;
};

struct ComputeArray {
    std::vector<ArrayAxis> dims;
    double energy_per_op = 0.0;  ///< pJ/op
    int ops_per_mac = 2;
    /// Sub-word parallelism per PE relative to the base precision.
    double lanes = 1.0;
    std::optional<ArrayReload> reload;

    int64_t pe_count() const;
    /// Peak ops/cycle of one array.
    double ops_per_cycle() const { return ops_per_mac * static_cast<double>(pe_count()) * lanes; }
    const ArrayAxis* find_axis(const std::string& name) const;

    bool operator==(const ComputeArray&) const = default;
};

struct ArchSpec {
    std::string name;
    ComputeArray array;
    std::vector<MemoryLevel> levels;  ///< innermost (L1) first
    double clock_hz = 1e9;
    OverlapMode latency_overlap = OverlapMode::overlapped;
    /// Each core replicates the array and L1; levels >= 2 are shared.
    int cores = 1;
    int base_precision_bits = 8;

    /// A_op: peak ops/cycle of the whole chip.
    double peak_ops_per_cycle() const { return array.ops_per_cycle() * cores; }
    const MemoryLevel& level(int level_index) const;

    bool operator==(const ArchSpec&) const = default;
};

// ============================================================================
// Workload
// ============================================================================

struct LoopDim {
    std::string name;
    int64_t size = 1;

    bool operator==(const LoopDim&) const = default;
};

struct OperandSpec {
    std::string name;
    OperandRole role = OperandRole::input;
    std::vector<std::string> relevant_dims;
    int precision_bits = 8;
    double density = 1.0;
    /// Output-like only; defaults to min(4 x widest input, 32) bits.
    std::optional<int> accumulator_bits;
    /// Packed or compressed storage cost per dense element, set by transforms.
    std::optional<double> bytes_per_element;

    bool is_relevant(const std::string& dim) const;

    bool operator==(const OperandSpec&) const = default;
};

struct WorkloadSpec {
    std::string name;
    std::vector<LoopDim> dims;
    std::vector<OperandSpec> operands;

    /// N_op = 2 x product of dim sizes.
    double op_count() const;
    /// N_op scaled by the density of every input-like operand.
    double effective_op_count() const;

    const LoopDim* find_dim(const std::string& name) const;
    const OperandSpec* find_operand(const std::string& name) const;
    OperandSpec* find_operand(const std::string& name);
    const OperandSpec* output() const;

    /// Bits per element moved for this operand (accumulator width for outputs).
    int traffic_bits(const OperandSpec& op) const;
    /// Byte-aligned cost unless a transform set an explicit storage cost.
    double bytes_per_element(const OperandSpec& op) const;
    /// Always ceil(traffic_bits / 8); used for capacity checks.
    int64_t footprint_bytes_per_element(const OperandSpec& op) const;

    bool operator==(const WorkloadSpec&) const = default;
};

// ============================================================================
// Mapping
// ============================================================================

struct SpatialUnroll {
    std::string axis;
    std::string dim;
    int64_t factor = 1;

    bool operator==(const SpatialUnroll&) const = default;
};

struct TemporalLoop {
    std::string dim;
    int64_t trip = 1;

    bool operator==(const TemporalLoop&) const = default;
};

struct CoreSplit {
    std::string dim;
    int64_t factor = 1;

    bool operator==(const CoreSplit&) const = default;
};

struct MappingSpec {
    std::vector<SpatialUnroll> spatial;
    /// temporal[l] holds the loops allocated to level l+1, innermost first.
    std::vector<std::vector<TemporalLoop>> temporal;
    std::optional<CoreSplit> core_split;

    int64_t active_cores() const { return core_split ? core_split->factor : 1; }
    /// Loops allocated to a level (1-based), empty when none are declared.
    const std::vector<TemporalLoop>& loops_at(int level_index) const;

    bool operator==(const MappingSpec&) const = default;
};

// ============================================================================
// Validation
// ============================================================================

enum class ViolationKind {
    architecture,
    workload,
    mapping,
    factorization,
    capacity,
};

struct Violation {
    ViolationKind kind;
    std::string field;    ///< e.g. "levels[0].bandwidth" or dim name
    std::string message;

    bool operator==(const Violation&) const = default;
};

const char* to_string(ViolationKind kind);

std::vector<Violation> validate(const ArchSpec& arch);
std::vector<Violation> validate(const WorkloadSpec& wl);
/// Every violated invariant of the triple, including tile capacity overflows.
std::vector<Violation> validate(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map);

/// Bytes of one operand's tile resident at a level (1-based); per core for L1.
int64_t operand_footprint(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                          const OperandSpec& op, int level_index);

/// Thrown by analyses that require a structurally valid triple.
class InvalidMapping : public std::runtime_error {
public:
    explicit InvalidMapping(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Throws InvalidMapping when validate() reports anything.
void require_valid(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map);

}  // namespace rlab

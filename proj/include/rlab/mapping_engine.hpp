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
 * @file mapping_engine.hpp
 * @brief Closed-form access counting, arithmetic intensity and utilization for a mapped loop nest.
 *
 * Counting rules (boundary i moves tiles between level Li and the level below it,
 * the compute array sitting below L1):
 *
 *   - Each level holds exactly one tile per operand and keeps it across consecutive
 *     iterations that do not index the operand (stationary buffers, no caching of
 *     older tiles).
 *   - Walking the loops at levels >= i from outermost to innermost, a tile transfer
 *     happens once per iteration of every loop down to the operand's innermost
 *     relevant one. Irrelevant loops below that point are free reuse.
 *   - A tile holds the operand's relevant extent of every spatial unroll and every
 *     temporal loop below level i. Irrelevant spatial unrolls are multicast (inputs)
 *     or reduced in the array (outputs) and cost nothing.
 *   - Output tiles are written back on every eviction; a tile that was written back
 *     before is read again (partial sums) when it becomes resident.
 *   - L1 is private per core, so the L1 boundary counts every active core. Above L1
 *     the core split behaves like a spatial unroll.
 */

#pragma once

#include "rlab/core_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlab {

struct OperandTraffic {
    std::string operand;
    int64_t fetch_events = 0;        ///< tile transfers per instance (write-backs for outputs)
    int64_t partial_sum_reads = 0;   ///< output tiles read back per instance
    int64_t elements_per_event = 0;  ///< elements in one tile
    int64_t instances = 1;           ///< private buffers served in parallel (cores at L1)
    int64_t elements_moved = 0;
    double bytes_moved = 0.0;

    bool operator==(const OperandTraffic&) const = default;
};

struct LevelTraffic {
    std::string level;
    int level_index = 0;
    std::vector<OperandTraffic> operands;
    double total_bytes = 0.0;  ///< N_Li
    std::optional<std::string> stationary_operand;

    const OperandTraffic* find(const std::string& operand) const;

    bool operator==(const LevelTraffic&) const = default;
};

struct AccessProfile {
    double op_count = 0.0;  ///< N_op (effective when operands are sparse)
    std::vector<LevelTraffic> levels;

    std::vector<double> level_bytes() const;

    bool operator==(const AccessProfile&) const = default;
};

/// Profile with only per-level byte totals, e.g. for what-if roofline points.
AccessProfile synthetic_profile(double op_count, const std::vector<double>& level_bytes);

/// Per level (index 0 = L1): operand kept stationary toward the level below, if any.
std::vector<std::optional<std::string>> derive_stationarity(const WorkloadSpec& wl, const MappingSpec& map,
                                                            int level_count);

/// Throws InvalidMapping for invalid triples.
AccessProfile count_accesses(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map);

/// AI_Li = N_op / N_Li per level; +inf where a level moves no bytes.
std::vector<double> arithmetic_intensity(const AccessProfile& profile);

struct Utilization {
    double spatial = 1.0;
    double temporal = 1.0;
    double core = 1.0;
    double total = 1.0;
    double compute_cycles = 0.0;  ///< N_op / (A_op x spatial x core)
    double reload_cycles = 0.0;   ///< serialized array reloads
    double transfer_stall_cycles = 0.0;  ///< non-overlapped memory transfers

    double stall_cycles() const { return reload_cycles + transfer_stall_cycles; }

    bool operator==(const Utilization&) const = default;
};

/// Active-lane fraction m / (ceil(m / M) x M) when a dim of size m is folded onto an axis of size M.
double fold_utilization(int64_t m, int64_t axis_size);

/**
 * Spatial x temporal x core utilization of a mapping.
 *
 * Temporal losses come from serialized array reloads (one stall of
 * cycles_per_tile per reload-operand tile load at L1) and, in serialized mode,
 * from every memory transfer. bandwidth_utilization derates B_Li.
 */
Utilization utilization(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                        const AccessProfile& profile, std::optional<OverlapMode> overlap = std::nullopt,
                        double bandwidth_utilization = 1.0);

}  // namespace rlab

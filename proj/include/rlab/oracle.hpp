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
 * @file oracle.hpp
 * @brief Brute-force access enumeration and a discrete-cycle pipeline simulator.
 *
 * enumerate_accesses walks every iteration of the mapped loop nest and tracks
 * the tile resident in each buffer as an explicit set of coordinates. It is
 * deliberately slow and does not call into the mapping engine; tests use it
 * to check count_accesses.
 */

#pragma once

#include "rlab/core_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

inline constexpr int64_t kDefaultIterationCap = int64_t{1} << 26;

/// Thrown when a nest is too large to enumerate.
class IterationCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EventKind { fetch, write_back, partial_read };

const char* to_string(EventKind kind);

struct AccessEvent {
    int64_t step = 0;  ///< temporal step at which the transfer is issued
    int level = 0;     ///< 1-based boundary
    std::string operand;
    EventKind kind = EventKind::fetch;
    int64_t elements = 0;
    double bytes = 0.0;
};

struct OperandCount {
    std::string operand;
    int64_t events = 0;         ///< fetches, or write-backs for outputs (summed over cores)
    int64_t partial_reads = 0;  ///< output tiles read back
    int64_t elements = 0;
    double bytes = 0.0;

    bool operator==(const OperandCount&) const = default;
};

/// Work handed to the pipeline for one tile (one temporal step).
struct TileDemand {
    std::vector<double> level_bytes;  ///< index 0 = L1
    double ops = 0.0;
    double compute_stall_cycles = 0.0;  ///< serialized array reload
};

struct EnumerationTrace {
    int64_t steps = 0;
    int64_t iterations = 0;  ///< steps x parallel points
    double ops_per_cycle_per_step = 0.0;  ///< array throughput while a step runs
    /// counts[l][k]: level l+1, operand k in workload order.
    std::vector<std::vector<OperandCount>> counts;
    std::vector<double> level_bytes;
    std::vector<TileDemand> tiles;
    std::vector<AccessEvent> events;  ///< filled only when requested

    const OperandCount& count(int level_index, const std::string& operand) const;
};

struct EnumerationOptions {
    int64_t iteration_cap = kDefaultIterationCap;
    bool record_events = false;
};

/// Throws InvalidMapping for invalid triples, IterationCapExceeded above the cap.
EnumerationTrace enumerate_accesses(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                                    const EnumerationOptions& options = {});

/// Event records as "cycle,level,operand,bytes" lines; cycle is the issuing step.
void write_trace(std::ostream& os, const EnumerationTrace& trace, const ArchSpec& arch);

struct SimulationResult {
    int64_t cycles = 0;
    std::vector<std::string> resources;  ///< levels outermost first, then "compute"
    std::vector<double> busy_cycles;     ///< same order

    bool operator==(const SimulationResult&) const = default;
};

/**
 * Tiles flow through the outermost level, every level below it, then the array.
 * Each resource handles up to its rate per cycle (B_Li x bandwidth_utilization,
 * compute_rate ops) and may start the next available tile in the same cycle. A
 * tile finished in cycle c reaches the next resource in cycle c + 1.
 * Serialized mode runs every resource of a tile back to back, whole cycles each.
 */
SimulationResult simulate_cycles(const ArchSpec& arch, const std::vector<TileDemand>& tiles, double compute_rate,
                                 OverlapMode overlap, double bandwidth_utilization = 1.0);

/// Enumerates the mapping, then simulates its per-step demand.
SimulationResult simulate_cycles(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                                 OverlapMode overlap, double bandwidth_utilization = 1.0,
                                 const EnumerationOptions& options = {});

}  // namespace rlab

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
 * @file roofline.hpp
 * @brief Task energy and latency, throughput and energy rooflines, operating points.
 *
 * Both rooflines share one x axis: the arithmetic intensity at a reference
 * level (ops/byte). Every other level enters through a ratio
 * r_i = AI_Li / AI_ref, so a curve is fixed by the architecture plus the ratios.
 *
 *   throughput (ops/cycle): min_i(r_i * ai * B_Li, A_op)
 *   energy (ops/pJ):        1 / (E_op + sum_i E_Li / (r_i * ai))
 *
 * Everything is in cycles and bytes/cycle; the clock only appears when a
 * value is converted to seconds.
 */

#pragma once

#include "rlab/core_model.hpp"
#include "rlab/mapping_engine.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rlab {

/// Relative tolerance for roofline equalities.
inline constexpr double kRooflineTolerance = 1e-9;

inline constexpr const char* kComputeLabel = "compute";

/// E_task = N_op * E_op + sum_i N_Li * E_Li, in pJ.
double task_energy(const ArchSpec& arch, const AccessProfile& profile);

struct LatencyBreakdown {
    OverlapMode mode = OverlapMode::overlapped;
    double cycles = 0.0;
    double seconds = 0.0;
    std::string limiter;              ///< level name or "compute"
    std::vector<double> level_cycles;  ///< N_Li / B_Li
    double compute_cycles = 0.0;
    double stall_cycles = 0.0;        ///< array reload stalls

    bool operator==(const LatencyBreakdown&) const = default;
};

/// Ideal task latency: the compute term is N_op / A_op with no utilization losses.
LatencyBreakdown task_latency(const ArchSpec& arch, const AccessProfile& profile,
                              std::optional<OverlapMode> overlap = std::nullopt);

/// Task latency including spatial/core under-utilization, array reload stalls
/// and a derating of every memory bandwidth.
LatencyBreakdown effective_latency(const ArchSpec& arch, const AccessProfile& profile, const Utilization& util,
                                   std::optional<OverlapMode> overlap = std::nullopt,
                                   double bandwidth_utilization = 1.0);

// ============================================================================
// Roofline curves
// ============================================================================

enum class RooflineKind { throughput, energy };

const char* to_string(RooflineKind kind);

struct RooflineSample {
    double ai = 0.0;
    double value = 0.0;
    std::string limiter;  ///< binding resource (throughput) or dominant energy term

    bool operator==(const RooflineSample&) const = default;
};

struct Knee {
    double ai = 0.0;
    std::string label;

    bool operator==(const Knee&) const = default;
};

struct RooflineCurve {
    RooflineKind kind = RooflineKind::throughput;
    std::vector<RooflineSample> samples;
    std::vector<Knee> knees;
    double asymptote = 0.0;  ///< plateau (ops/cycle) or 1/E_op (ops/pJ)
    std::string label;

    bool operator==(const RooflineCurve&) const = default;
};

struct SamplingOptions {
    double ai_min = 1e-2;
    double ai_max = 1e5;
    int points_per_decade = 64;
};

struct Ceiling {
    double value = 0.0;
    std::string limiter;
};

/// r_i = AI_Li / AI_ref for every level; reference_level is 1-based.
std::vector<double> ai_ratios(const AccessProfile& profile, int reference_level);

Ceiling throughput_ceiling(const ArchSpec& arch, std::span<const double> ratios, double ai_ref);
Ceiling energy_ceiling(const ArchSpec& arch, std::span<const double> ratios, double ai_ref);

/// Single knee where the cheapest memory diagonal meets A_op; none if memory is unbounded.
std::optional<Knee> throughput_knee(const ArchSpec& arch, std::span<const double> ratios);
/// Per level, the ai_ref where E_Li / AI_Li equals E_op.
std::vector<Knee> energy_knees(const ArchSpec& arch, std::span<const double> ratios);

RooflineCurve throughput_roofline(const ArchSpec& arch, std::span<const double> ratios,
                                  const SamplingOptions& sampling = {});
RooflineCurve energy_roofline(const ArchSpec& arch, std::span<const double> ratios,
                              const SamplingOptions& sampling = {});

// ============================================================================
// Operating point
// ============================================================================

struct OperatingPoint {
    int reference_level = 1;
    double ai_ref = 0.0;
    double attained_ops_per_cycle = 0.0;
    double attained_ops_per_second = 0.0;
    double attained_ops_per_pj = 0.0;  ///< = TOPS/W
    double throughput_ceiling = 0.0;   ///< ops/cycle at ai_ref
    double energy_ceiling = 0.0;       ///< ops/pJ at ai_ref
    std::string throughput_bound;      ///< "compute-bound" or "memory-bound(Lx)"
    std::string energy_bound;

    bool operator==(const OperatingPoint&) const = default;
};

/**
 * Places a profile under both rooflines.
 *
 * Throws std::logic_error if the attained values exceed the ceilings beyond
 * kRooflineTolerance and std::invalid_argument if the reference level moves
 * no bytes.
 */
OperatingPoint operating_point(const ArchSpec& arch, const AccessProfile& profile, const LatencyBreakdown& latency,
                               double energy_pj, int reference_level);

}  // namespace rlab

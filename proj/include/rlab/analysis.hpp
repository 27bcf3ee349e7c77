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

#pragma once

#include "rlab/core_model.hpp"
#include "rlab/mapping_engine.hpp"
#include "rlab/roofline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlab {

struct AnalysisOptions {
    std::optional<OverlapMode> overlap;  ///< overrides ArchSpec::latency_overlap
    int reference_level = 0;             ///< 0 = L2 when present, else L1
    double bandwidth_utilization = 1.0;  ///< U_mem applied to every B_Li
};

struct AnalysisResult {
    AccessProfile profile;
    std::vector<double> ai;         ///< AI_Li
    std::vector<double> ai_ratios;  ///< AI_Li / AI_ref
    int reference_level = 1;
    Utilization utilization;
    double energy_pj = 0.0;
    LatencyBreakdown latency;
    OperatingPoint point;
    std::string bottleneck;

    bool operator==(const AnalysisResult&) const = default;
};

int resolve_reference_level(const ArchSpec& arch, int requested);

AnalysisResult analyze(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                       const AnalysisOptions& options = {});

/// Same pipeline for a bare profile; utilization is taken as ideal.
AnalysisResult analyze_profile(const ArchSpec& arch, const AccessProfile& profile,
                               const AnalysisOptions& options = {});

}  // namespace rlab

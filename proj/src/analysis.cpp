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

#include "rlab/analysis.hpp"

#include <cstdio>
#include <stdexcept>

namespace rlab {

namespace {

std::string narrate(const ArchSpec& arch, const AnalysisResult& r) {
    char buf[256];
    std::string out;
    if (r.latency.limiter == kComputeLabel) {
        std::snprintf(buf, sizeof buf, "compute-bound (utilization %.4g)", r.utilization.total);
    } else {
        std::snprintf(buf, sizeof buf, "memory-bound at %s", r.latency.limiter.c_str());
    }
    out = buf;

    double largest = r.profile.op_count * arch.array.energy_per_op;
    std::string where = "compute";
    for (size_t i = 0; i < arch.levels.size(); ++i) {
        const double e = r.profile.levels[i].total_bytes * arch.levels[i].energy_per_byte;
        if (e > largest) {
            largest = e;
            where = arch.levels[i].name;
        }
    }
    std::snprintf(buf, sizeof buf, "; largest energy term %s (%.4g of %.6g pJ)", where.c_str(), largest,
                  r.energy_pj);
    return out + buf;
}

AnalysisResult finish(const ArchSpec& arch, AccessProfile profile, const Utilization& util,
                      const AnalysisOptions& options) {
    AnalysisResult r;
    r.reference_level = resolve_reference_level(arch, options.reference_level);
    r.ai = arithmetic_intensity(profile);
    r.ai_ratios = ai_ratios(profile, r.reference_level);
    r.utilization = util;
    r.energy_pj = task_energy(arch, profile);
    r.latency = effective_latency(arch, profile, util, options.overlap, options.bandwidth_utilization);
    r.point = operating_point(arch, profile, r.latency, r.energy_pj, r.reference_level);
    r.profile = std::move(profile);
    r.bottleneck = narrate(arch, r);
    return r;
}

}  // namespace

int resolve_reference_level(const ArchSpec& arch, int requested) {
    const int n = static_cast<int>(arch.levels.size());
    if (requested == 0) return n >= 2 ? 2 : 1;
    if (requested < 1 || requested > n) {
        throw std::invalid_argument("reference level L" + std::to_string(requested) + " does not exist");
    }
    return requested;
}

AnalysisResult analyze(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                       const AnalysisOptions& options) {
    auto profile = count_accesses(arch, wl, map);
    auto util = utilization(arch, wl, map, profile, options.overlap, options.bandwidth_utilization);
    return finish(arch, std::move(profile), util, options);
}

AnalysisResult analyze_profile(const ArchSpec& arch, const AccessProfile& profile, const AnalysisOptions& options) {
    auto v = validate(arch);
    if (!v.empty()) throw InvalidMapping(std::move(v));
    Utilization util;
    util.compute_cycles = profile.op_count / arch.peak_ops_per_cycle();
    if (options.overlap.value_or(arch.latency_overlap) == OverlapMode::serialized) {
        for (size_t i = 0; i < arch.levels.size() && i < profile.levels.size(); ++i) {
            util.transfer_stall_cycles +=
                profile.levels[i].total_bytes / (arch.levels[i].bandwidth * options.bandwidth_utilization);
        }
        const double busy = util.compute_cycles + util.stall_cycles();
        util.temporal = busy > 0 ? util.compute_cycles / busy : 1.0;
        util.total = util.temporal;
    }
    return finish(arch, profile, util, options);
}

}  // namespace rlab

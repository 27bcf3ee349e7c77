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

#include "rlab/mapping_engine.hpp"

#include <algorithm>
#include <limits>

namespace rlab {

const OperandTraffic* LevelTraffic::find(const std::string& operand) const {
    auto it = std::find_if(operands.begin(), operands.end(),
                           [&](const OperandTraffic& t) { return t.operand == operand; });
    return it == operands.end() ? nullptr : &*it;
}

std::vector<double> AccessProfile::level_bytes() const {
    std::vector<double> out;
    out.reserve(levels.size());
    for (const auto& l : levels) out.push_back(l.total_bytes);
    return out;
}

AccessProfile synthetic_profile(double op_count, const std::vector<double>& level_bytes) {
    AccessProfile p;
    p.op_count = op_count;
    for (size_t i = 0; i < level_bytes.size(); ++i) {
        LevelTraffic lt;
        lt.level = "L" + std::to_string(i + 1);
        lt.level_index = static_cast<int>(i) + 1;
        lt.total_bytes = level_bytes[i];
        p.levels.push_back(std::move(lt));
    }
    return p;
}

std::vector<std::optional<std::string>> derive_stationarity(const WorkloadSpec& wl, const MappingSpec& map,
                                                            int level_count) {
    std::vector<std::optional<std::string>> out(static_cast<size_t>(level_count));
    for (int l = 1; l <= level_count; ++l) {
        const auto& loops = map.loops_at(l);
        auto inner = std::find_if(loops.begin(), loops.end(), [](const TemporalLoop& t) { return t.trip > 1; });
        if (inner == loops.end()) continue;

        // Only one operand can be kept constant per level; outputs win ties.
        const OperandSpec* pick = nullptr;
        for (const auto& op : wl.operands) {
            if (op.is_relevant(inner->dim)) continue;
            if (!pick || (op.role == OperandRole::output && pick->role != OperandRole::output)) pick = &op;
        }
        if (pick) out[static_cast<size_t>(l - 1)] = pick->name;
    }
    return out;
}

namespace {

// Loops at levels >= boundary, outermost first, trip-1 loops dropped.
std::vector<TemporalLoop> loops_above(const MappingSpec& map, int boundary, int level_count) {
    std::vector<TemporalLoop> out;
    for (int l = level_count; l >= boundary; --l) {
        const auto& loops = map.loops_at(l);
        for (auto it = loops.rbegin(); it != loops.rend(); ++it) {
            if (it->trip > 1) out.push_back(*it);
        }
    }
    return out;
}

int64_t tile_elements(const MappingSpec& map, const OperandSpec& op, int boundary) {
    int64_t elems = 1;
    for (const auto& s : map.spatial) {
        if (op.is_relevant(s.dim)) elems *= s.factor;
    }
    for (int l = 1; l < boundary; ++l) {
        for (const auto& t : map.loops_at(l)) {
            if (op.is_relevant(t.dim)) elems *= t.trip;
        }
    }
    if (boundary >= 2 && map.core_split && op.is_relevant(map.core_split->dim)) elems *= map.core_split->factor;
    return elems;
}

}  // namespace

AccessProfile count_accesses(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map) {
    require_valid(arch, wl, map);

    const int n = static_cast<int>(arch.levels.size());
    const auto stationary = derive_stationarity(wl, map, n);

    AccessProfile profile;
    profile.op_count = wl.effective_op_count();

    for (int b = 1; b <= n; ++b) {
        const auto outer = loops_above(map, b, n);

        LevelTraffic lt;
        lt.level = arch.levels[static_cast<size_t>(b - 1)].name;
        lt.level_index = b;
        lt.stationary_operand = stationary[static_cast<size_t>(b - 1)];

        for (const auto& op : wl.operands) {
            int64_t runs = 1;
            int64_t distinct = 1;
            auto innermost = std::find_if(outer.rbegin(), outer.rend(),
                                          [&](const TemporalLoop& t) { return op.is_relevant(t.dim); });
            if (innermost != outer.rend()) {
                const auto stop = innermost.base();  // one past the innermost relevant loop
                for (auto it = outer.begin(); it != stop; ++it) runs *= it->trip;
            }
            for (const auto& t : outer) {
                if (op.is_relevant(t.dim)) distinct *= t.trip;
            }

            OperandTraffic t;
            t.operand = op.name;
            t.fetch_events = runs;
            t.elements_per_event = tile_elements(map, op, b);
            t.instances = b == 1 ? map.active_cores() : 1;
            if (op.role == OperandRole::output) t.partial_sum_reads = runs - distinct;
            t.elements_moved = (t.fetch_events + t.partial_sum_reads) * t.elements_per_event * t.instances;
            t.bytes_moved = static_cast<double>(t.elements_moved) * wl.bytes_per_element(op);
            lt.total_bytes += t.bytes_moved;
            lt.operands.push_back(std::move(t));
        }
        profile.levels.push_back(std::move(lt));
    }
    return profile;
}

std::vector<double> arithmetic_intensity(const AccessProfile& profile) {
    std::vector<double> ai;
    ai.reserve(profile.levels.size());
    for (const auto& l : profile.levels) {
        ai.push_back(l.total_bytes > 0 ? profile.op_count / l.total_bytes
                                       : std::numeric_limits<double>::infinity());
    }
    return ai;
}

double fold_utilization(int64_t m, int64_t axis_size) {
    if (m < 1 || axis_size < 1) throw std::invalid_argument("fold_utilization: sizes must be >= 1");
    const int64_t folds = (m + axis_size - 1) / axis_size;
    return static_cast<double>(m) / static_cast<double>(folds * axis_size);
}

Utilization utilization(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                        const AccessProfile& profile, std::optional<OverlapMode> overlap,
                        double bandwidth_utilization) {
    require_valid(arch, wl, map);

    Utilization u;
    for (const auto& axis : arch.array.dims) {
        auto it = std::find_if(map.spatial.begin(), map.spatial.end(),
                               [&](const SpatialUnroll& s) { return s.axis == axis.name; });
        const int64_t unroll = it == map.spatial.end() ? 1 : it->factor;
        u.spatial *= fold_utilization(unroll, axis.size);
    }
    u.core = static_cast<double>(map.active_cores()) / static_cast<double>(arch.cores);

    u.compute_cycles = profile.op_count / (arch.peak_ops_per_cycle() * u.spatial * u.core);

    if (const auto& reload = arch.array.reload; reload && !reload->overlapped && !profile.levels.empty()) {
        if (const auto* t = profile.levels.front().find(reload->operand)) {
            u.reload_cycles = static_cast<double>(t->fetch_events) * reload->cycles_per_tile;
        }
    }
    if (overlap.value_or(arch.latency_overlap) == OverlapMode::serialized) {
        for (size_t i = 0; i < profile.levels.size() && i < arch.levels.size(); ++i) {
            u.transfer_stall_cycles += profile.levels[i].total_bytes / (arch.levels[i].bandwidth * bandwidth_utilization);
        }
    }

    const double busy = u.compute_cycles + u.stall_cycles();
    u.temporal = busy > 0 ? u.compute_cycles / busy : 1.0;
    u.total = u.spatial * u.temporal * u.core;
    return u;
}

}  // namespace rlab

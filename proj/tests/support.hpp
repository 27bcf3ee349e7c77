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

// Builders shared by the unit tests and the acceptance binary.

#pragma once

#include "rlab/core_model.hpp"
#include "rlab/mapping_engine.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace rlab::testing {

inline MemoryLevel level(int index, double bw, double e) {
    return {"L" + std::to_string(index), bw, e, std::nullopt, index};
}

/// Three-level machine with the canonical regression constants.
inline ArchSpec fig3_arch() {
    ArchSpec a;
    a.name = "fig3";
    a.array.dims = {{"rows", 32}, {"cols", 32}};
    a.array.energy_per_op = 0.5;
    a.levels = {level(1, 128, 0.1), level(2, 32, 3), level(3, 8, 100)};
    return a;
}

inline ArchSpec two_level_arch(int64_t rows = 1, int64_t cols = 1, int cores = 1) {
    ArchSpec a;
    a.name = "small";
    a.array.dims = {{"rows", rows}, {"cols", cols}};
    a.array.energy_per_op = 1.0;
    a.cores = cores;
    a.levels = {level(1, 16, 1), level(2, 4, 10)};
    return a;
}

/// O[b,k] += W[k,c] * I[b,c].
inline WorkloadSpec gemm(int64_t b, int64_t k, int64_t c, int output_bits = 32) {
    WorkloadSpec w;
    w.name = "gemm";
    w.dims = {{"b", b}, {"k", k}, {"c", c}};
    OperandSpec wt{"W", OperandRole::input, {"k", "c"}};
    OperandSpec in{"I", OperandRole::input, {"b", "c"}};
    OperandSpec out{"O", OperandRole::output, {"b", "k"}};
    out.accumulator_bits = output_bits;
    w.operands = {wt, in, out};
    return w;
}

/// Every power-of-two split of each dim over L1/L2 and every loop order at both levels.
inline std::vector<MappingSpec> exhaustive_two_level_mappings(const WorkloadSpec& wl) {
    std::vector<std::vector<std::pair<int64_t, int64_t>>> splits;
    for (const auto& d : wl.dims) {
        std::vector<std::pair<int64_t, int64_t>> s;
        for (int64_t inner = 1; inner <= d.size; inner *= 2) s.emplace_back(inner, d.size / inner);
        splits.push_back(std::move(s));
    }

    std::vector<size_t> order(wl.dims.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::vector<size_t>> perms;
    do perms.push_back(order);
    while (std::next_permutation(order.begin(), order.end()));

    std::vector<MappingSpec> out;
    std::vector<size_t> pick(wl.dims.size(), 0);
    while (true) {
        for (const auto& p1 : perms) {
            for (const auto& p2 : perms) {
                MappingSpec m;
                m.temporal.resize(2);
                for (size_t i : p1) m.temporal[0].push_back({wl.dims[i].name, splits[i][pick[i]].first});
                for (size_t i : p2) m.temporal[1].push_back({wl.dims[i].name, splits[i][pick[i]].second});
                out.push_back(std::move(m));
            }
        }
        size_t d = 0;
        while (d < pick.size() && ++pick[d] == splits[d].size()) pick[d++] = 0;
        if (d == pick.size()) break;
    }
    return out;
}

inline std::string describe(const MappingSpec& m) {
    std::string s;
    for (size_t l = 0; l < m.temporal.size(); ++l) {
        s += "L" + std::to_string(l + 1) + "[";
        for (const auto& t : m.temporal[l]) s += t.dim + std::to_string(t.trip) + " ";
        s += "] ";
    }
    for (const auto& u : m.spatial) s += u.axis + ":" + u.dim + std::to_string(u.factor) + " ";
    if (m.core_split) s += "cores:" + m.core_split->dim + std::to_string(m.core_split->factor);
    return s;
}

}  // namespace rlab::testing

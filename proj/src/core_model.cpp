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

#include "rlab/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace rlab {

const char* to_string(OverlapMode mode) {
    return mode == OverlapMode::overlapped ? "overlapped" : "serialized";
}

const char* to_string(OperandRole role) {
    return role == OperandRole::input ? "input" : "output";
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::architecture: return "architecture";
        case ViolationKind::workload: return "workload";
        case ViolationKind::mapping: return "mapping";
        case ViolationKind::factorization: return "factorization";
        case ViolationKind::capacity: return "capacity";
    }
    return "unknown";
}

int64_t ComputeArray::pe_count() const {
    int64_t n = 1;
    for (const auto& d : dims) n *= d.size;
    return n;
}

const ArrayAxis* ComputeArray::find_axis(const std::string& name) const {
    auto it = std::find_if(dims.begin(), dims.end(), [&](const ArrayAxis& a) { return a.name == name; });
    return it == dims.end() ? nullptr : &*it;
}

const MemoryLevel& ArchSpec::level(int level_index) const {
    if (level_index < 1 || level_index > static_cast<int>(levels.size())) {
        throw std::out_of_range("memory level L" + std::to_string(level_index) + " does not exist");
    }
    return levels[level_index - 1];
}

bool OperandSpec::is_relevant(const std::string& dim) const {
    return std::find(relevant_dims.begin(), relevant_dims.end(), dim) != relevant_dims.end();
}

double WorkloadSpec::op_count() const {
    double n = 2.0;
    for (const auto& d : dims) n *= static_cast<double>(d.size);
    return n;
}

double WorkloadSpec::effective_op_count() const {
    double n = op_count();
    for (const auto& op : operands) {
        if (op.role == OperandRole::input) n *= op.density;
    }
    return n;
}

const LoopDim* WorkloadSpec::find_dim(const std::string& name) const {
    auto it = std::find_if(dims.begin(), dims.end(), [&](const LoopDim& d) { return d.name == name; });
    return it == dims.end() ? nullptr : &*it;
}

const OperandSpec* WorkloadSpec::find_operand(const std::string& name) const {
    auto it = std::find_if(operands.begin(), operands.end(), [&](const OperandSpec& o) { return o.name == name; });
    return it == operands.end() ? nullptr : &*it;
}

OperandSpec* WorkloadSpec::find_operand(const std::string& name) {
    auto it = std::find_if(operands.begin(), operands.end(), [&](const OperandSpec& o) { return o.name == name; });
    return it == operands.end() ? nullptr : &*it;
}

const OperandSpec* WorkloadSpec::output() const {
    auto it = std::find_if(operands.begin(), operands.end(),
                           [](const OperandSpec& o) { return o.role == OperandRole::output; });
    return it == operands.end() ? nullptr : &*it;
}

int WorkloadSpec::traffic_bits(const OperandSpec& op) const {
    if (op.role == OperandRole::input) return op.precision_bits;
    if (op.accumulator_bits) return *op.accumulator_bits;
    int widest = 0;
    for (const auto& o : operands) {
        if (o.role == OperandRole::input) widest = std::max(widest, o.precision_bits);
    }
    if (widest == 0) widest = op.precision_bits;
    return std::min(4 * widest, 32);
}

double WorkloadSpec::bytes_per_element(const OperandSpec& op) const {
    if (op.bytes_per_element) return *op.bytes_per_element;
    return static_cast<double>(footprint_bytes_per_element(op));
}

int64_t WorkloadSpec::footprint_bytes_per_element(const OperandSpec& op) const {
    return (traffic_bits(op) + 7) / 8;
}

const std::vector<TemporalLoop>& MappingSpec::loops_at(int level_index) const {
    static const std::vector<TemporalLoop> empty;
    if (level_index < 1 || level_index > static_cast<int>(temporal.size())) return empty;
    return temporal[level_index - 1];
}

InvalidMapping::InvalidMapping(std::vector<Violation> violations)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "invalid configuration (" << violations.size() << " violation"
             << (violations.size() == 1 ? "" : "s") << ")";
          for (const auto& v : violations) os << "\n  " << to_string(v.kind) << " " << v.field << ": " << v.message;
          return os.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

std::string idx(const char* prefix, size_t i, const char* field) {
    return std::string(prefix) + "[" + std::to_string(i) + "]." + field;
}

}  // namespace

std::vector<Violation> validate(const ArchSpec& arch) {
    std::vector<Violation> out;
    auto add = [&](std::string field, std::string msg) {
        out.push_back({ViolationKind::architecture, std::move(field), std::move(msg)});
    };
    if (!(arch.clock_hz > 0)) add("clock_hz", "must be > 0");
    if (arch.cores < 1) add("cores", "must be >= 1");
    if (arch.base_precision_bits < 1) add("base_precision_bits", "must be >= 1");
    if (arch.array.dims.empty()) add("array.dims", "compute array needs at least one axis");
    std::set<std::string> axes;
    for (size_t i = 0; i < arch.array.dims.size(); ++i) {
        const auto& a = arch.array.dims[i];
        if (a.size < 1) add(idx("array.dims", i, "size"), "must be >= 1");
        if (!axes.insert(a.name).second) add(idx("array.dims", i, "axis"), "duplicate axis '" + a.name + "'");
    }
    if (!(arch.array.energy_per_op >= 0)) add("array.energy_per_op", "must be >= 0");
    if (arch.array.ops_per_mac != 2) add("array.ops_per_mac", "a MAC counts as 2 operations");
    if (!(arch.array.lanes > 0)) add("array.lanes", "must be > 0");
    if (arch.array.reload && !(arch.array.reload->cycles_per_tile >= 0)) {
        add("array.reload.cycles_per_tile", "must be >= 0");
    }
    if (arch.levels.empty()) add("levels", "at least one memory level is required");
    for (size_t i = 0; i < arch.levels.size(); ++i) {
        const auto& l = arch.levels[i];
        if (!(l.bandwidth > 0)) add(idx("levels", i, "bandwidth"), "must be > 0");
        if (!(l.energy_per_byte >= 0)) add(idx("levels", i, "energy_per_byte"), "must be >= 0");
        if (l.capacity && !(*l.capacity > 0)) add(idx("levels", i, "capacity"), "must be > 0 when present");
        if (l.level_index != static_cast<int>(i) + 1) {
            add(idx("levels", i, "level_index"),
                "expected " + std::to_string(i + 1) + " (indices contiguous from 1, innermost first), got " +
                    std::to_string(l.level_index));
        }
    }
    return out;
}

std::vector<Violation> validate(const WorkloadSpec& wl) {
    std::vector<Violation> out;
    auto add = [&](std::string field, std::string msg) {
        out.push_back({ViolationKind::workload, std::move(field), std::move(msg)});
    };
    std::set<std::string> names;
    for (size_t i = 0; i < wl.dims.size(); ++i) {
        const auto& d = wl.dims[i];
        if (d.size < 1) add(idx("dims", i, "size"), "must be >= 1");
        if (!names.insert(d.name).second) add(idx("dims", i, "name"), "duplicate loop dim '" + d.name + "'");
    }
    int outputs = 0;
    std::set<std::string> op_names;
    for (size_t i = 0; i < wl.operands.size(); ++i) {
        const auto& op = wl.operands[i];
        if (!op_names.insert(op.name).second) add(idx("operands", i, "name"), "duplicate operand '" + op.name + "'");
        if (op.role == OperandRole::output) ++outputs;
        for (const auto& d : op.relevant_dims) {
            if (!names.count(d)) add(idx("operands", i, "relevant_dims"), "unknown loop dim '" + d + "'");
        }
        if (op.precision_bits < 1) add(idx("operands", i, "precision_bits"), "must be >= 1");
        if (!(op.density > 0 && op.density <= 1)) add(idx("operands", i, "density"), "must lie in (0, 1]");
        if (op.accumulator_bits) {
            if (op.role != OperandRole::output) {
                add(idx("operands", i, "accumulator_bits"), "only output-like operands carry an accumulator");
            } else if (*op.accumulator_bits < 1) {
                add(idx("operands", i, "accumulator_bits"), "must be >= 1");
            }
        }
        if (op.bytes_per_element && !(*op.bytes_per_element > 0)) {
            add(idx("operands", i, "bytes_per_element"), "must be > 0");
        }
    }
    if (outputs != 1) add("operands", "exactly one output-like operand required, found " + std::to_string(outputs));
    for (const auto& d : wl.dims) {
        bool used = std::any_of(wl.operands.begin(), wl.operands.end(),
                                [&](const OperandSpec& o) { return o.is_relevant(d.name); });
        if (!used) add(d.name, "loop dim is not relevant to any operand");
    }
    return out;
}

int64_t operand_footprint(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                          const OperandSpec& op, int level_index) {
    (void)arch;
    int64_t elems = 1;
    for (const auto& s : map.spatial) {
        if (op.is_relevant(s.dim)) elems *= s.factor;
    }
    for (int l = 1; l <= level_index; ++l) {
        for (const auto& t : map.loops_at(l)) {
            if (op.is_relevant(t.dim)) elems *= t.trip;
        }
    }
    if (level_index >= 2 && map.core_split && op.is_relevant(map.core_split->dim)) {
        elems *= map.core_split->factor;
    }
    return elems * wl.footprint_bytes_per_element(op);
}

std::vector<Violation> validate(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map) {
    std::vector<Violation> out = validate(arch);
    auto wl_v = validate(wl);
    out.insert(out.end(), wl_v.begin(), wl_v.end());
    auto add = [&](ViolationKind kind, std::string field, std::string msg) {
        out.push_back({kind, std::move(field), std::move(msg)});
    };

    if (map.temporal.size() > arch.levels.size()) {
        add(ViolationKind::mapping, "temporal",
            "loops allocated to " + std::to_string(map.temporal.size()) + " levels but the architecture has " +
                std::to_string(arch.levels.size()));
    }

    std::map<std::string, int64_t> product;
    for (const auto& d : wl.dims) product[d.name] = 1;
    auto known_dim = [&](const std::string& name) { return product.count(name) > 0; };

    std::set<std::string> used_axes;
    for (size_t i = 0; i < map.spatial.size(); ++i) {
        const auto& s = map.spatial[i];
        const ArrayAxis* axis = arch.array.find_axis(s.axis);
        if (!axis) {
            add(ViolationKind::mapping, idx("spatial", i, "axis"), "unknown array axis '" + s.axis + "'");
        } else if (s.factor > axis->size) {
            add(ViolationKind::mapping, idx("spatial", i, "factor"),
                "unroll " + std::to_string(s.factor) + " exceeds axis '" + s.axis + "' size " +
                    std::to_string(axis->size));
        }
        if (!used_axes.insert(s.axis).second) {
            add(ViolationKind::mapping, idx("spatial", i, "axis"), "axis '" + s.axis + "' mapped more than once");
        }
        if (s.factor < 1) add(ViolationKind::mapping, idx("spatial", i, "factor"), "must be >= 1");
        if (!known_dim(s.dim)) {
            add(ViolationKind::mapping, idx("spatial", i, "dim"), "unknown loop dim '" + s.dim + "'");
        } else {
            product[s.dim] *= std::max<int64_t>(s.factor, 1);
        }
    }
    for (size_t l = 0; l < map.temporal.size(); ++l) {
        for (size_t k = 0; k < map.temporal[l].size(); ++k) {
            const auto& t = map.temporal[l][k];
            std::string field = "temporal[" + std::to_string(l) + "][" + std::to_string(k) + "]";
            if (t.trip < 1) add(ViolationKind::mapping, field + ".trip", "must be >= 1");
            if (!known_dim(t.dim)) {
                add(ViolationKind::mapping, field + ".dim", "unknown loop dim '" + t.dim + "'");
            } else {
                product[t.dim] *= std::max<int64_t>(t.trip, 1);
            }
        }
    }
    if (map.core_split) {
        const auto& c = *map.core_split;
        if (c.factor < 1) add(ViolationKind::mapping, "core_split.factor", "must be >= 1");
        if (c.factor > arch.cores) {
            add(ViolationKind::mapping, "core_split.factor",
                "split " + std::to_string(c.factor) + " exceeds " + std::to_string(arch.cores) + " cores");
        }
        if (!known_dim(c.dim)) {
            add(ViolationKind::mapping, "core_split.dim", "unknown loop dim '" + c.dim + "'");
        } else {
            product[c.dim] *= std::max<int64_t>(c.factor, 1);
        }
    }
    for (const auto& d : wl.dims) {
        if (product[d.name] != d.size) {
            add(ViolationKind::factorization, d.name,
                "spatial x temporal x core factors multiply to " + std::to_string(product[d.name]) +
                    " but the dim size is " + std::to_string(d.size));
        }
    }

    if (!out.empty()) return out;

    for (const auto& level : arch.levels) {
        if (!level.capacity) continue;
        int64_t total = 0;
        for (const auto& op : wl.operands) total += operand_footprint(arch, wl, map, op, level.level_index);
        if (static_cast<double>(total) > *level.capacity) {
            std::ostringstream os;
            os << "tiles need " << total << " bytes but capacity is " << *level.capacity;
            add(ViolationKind::capacity, level.name, os.str());
        }
    }
    return out;
}

void require_valid(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map) {
    auto v = validate(arch, wl, map);
    if (!v.empty()) throw InvalidMapping(std::move(v));
}

}  // namespace rlab

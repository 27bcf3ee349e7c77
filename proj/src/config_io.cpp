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

#include "rlab/config_io.hpp"

#include "rlab/mapping_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rlab {

using json = nlohmann::ordered_json;

ConfigError::ConfigError(Kind kind, std::string path, std::string field, std::string message, int line,
                         std::vector<Violation> violations)
    : std::runtime_error(path + (line > 0 ? ":" + std::to_string(line) : "") + (field.empty() ? "" : ": " + field) +
                         ": " + message),
      kind_(kind),
      path_(std::move(path)),
      field_(std::move(field)),
      line_(line),
      violations_(std::move(violations)) {}

namespace {

// Field-path aware accessors over a parsed document.
class Reader {
public:
    explicit Reader(std::string path) : path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
        throw ConfigError(ConfigError::Kind::syntax, path_, field, msg);
    }

    const json& object(const json& j, const std::string& field, std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) fail(field, "expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!ok.count(it.key())) fail(join(field, it.key()), "unknown key");
        }
        return j;
    }

    const json& array(const json& j, const std::string& field) const {
        if (!j.is_array()) fail(field, "expected an array");
        return j;
    }

    const json* find(const json& obj, const char* key) const {
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    const json& need(const json& obj, const std::string& field, const char* key) const {
        const json* v = find(obj, key);
        if (!v) fail(join(field, key), "required field is missing");
        return *v;
    }

    double number(const json& v, const std::string& field) const {
        if (!v.is_number()) fail(field, "expected a number");
        return v.get<double>();
    }

    int64_t integer(const json& v, const std::string& field) const {
        if (!v.is_number_integer()) fail(field, "expected an integer");
        return v.get<int64_t>();
    }

    std::string string(const json& v, const std::string& field) const {
        if (!v.is_string()) fail(field, "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const json& v, const std::string& field) const {
        if (!v.is_boolean()) fail(field, "expected true or false");
        return v.get<bool>();
    }

    // Optional-with-default helpers.
    double number_or(const json& obj, const std::string& field, const char* key, double dflt) const {
        const json* v = find(obj, key);
        return v ? number(*v, join(field, key)) : dflt;
    }
    int64_t integer_or(const json& obj, const std::string& field, const char* key, int64_t dflt) const {
        const json* v = find(obj, key);
        return v ? integer(*v, join(field, key)) : dflt;
    }
    std::string string_or(const json& obj, const std::string& field, const char* key, std::string dflt) const {
        const json* v = find(obj, key);
        return v ? string(*v, join(field, key)) : dflt;
    }
    bool boolean_or(const json& obj, const std::string& field, const char* key, bool dflt) const {
        const json* v = find(obj, key);
        return v ? boolean(*v, join(field, key)) : dflt;
    }

    static std::string join(const std::string& field, const std::string& key) {
        return field.empty() ? key : field + "." + key;
    }
    static std::string at(const std::string& field, size_t i) { return field + "[" + std::to_string(i) + "]"; }

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

json parse_text(const std::string& text, const std::string& path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        std::string msg = e.what();
        if (auto pos = msg.find(": syntax error"); pos != std::string::npos) msg = msg.substr(pos + 2);
        throw ConfigError(ConfigError::Kind::syntax, path, "", msg, line);
    }
}

void check_invariants(const std::vector<Violation>& v, const std::string& path) {
    if (v.empty()) return;
    throw ConfigError(ConfigError::Kind::invariant, path, v.front().field, v.front().message, 0, v);
}

OverlapMode parse_overlap(const Reader& r, const json& v, const std::string& field) {
    const auto s = r.string(v, field);
    if (s == "overlapped") return OverlapMode::overlapped;
    if (s == "serialized") return OverlapMode::serialized;
    r.fail(field, "expected \"overlapped\" or \"serialized\", got \"" + s + "\"");
}

int to_int(const Reader& r, int64_t v, const std::string& field) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) r.fail(field, "out of range");
    return static_cast<int>(v);
}

std::map<std::string, int> int_map(const Reader& r, const json& v, const std::string& field) {
    if (!v.is_object()) r.fail(field, "expected an object");
    std::map<std::string, int> out;
    for (auto it = v.begin(); it != v.end(); ++it) {
        const auto f = Reader::join(field, it.key());
        out[it.key()] = to_int(r, r.integer(it.value(), f), f);
    }
    return out;
}

std::map<std::string, double> num_map(const Reader& r, const json& v, const std::string& field) {
    if (!v.is_object()) r.fail(field, "expected an object");
    std::map<std::string, double> out;
    for (auto it = v.begin(); it != v.end(); ++it) out[it.key()] = r.number(it.value(), Reader::join(field, it.key()));
    return out;
}

// ---------------------------------------------------------------------------
// Architecture
// ---------------------------------------------------------------------------

ArchSpec arch_from_json(const Reader& r, const json& root) {
    r.object(root, "", {"name", "clock_hz", "latency_overlap", "cores", "base_precision_bits", "array", "levels"});
    ArchSpec a;
    a.name = r.string(r.need(root, "", "name"), "name");
    a.clock_hz = r.number_or(root, "", "clock_hz", 1e9);
    if (const json* v = r.find(root, "latency_overlap")) a.latency_overlap = parse_overlap(r, *v, "latency_overlap");
    a.cores = to_int(r, r.integer_or(root, "", "cores", 1), "cores");
    a.base_precision_bits = to_int(r, r.integer_or(root, "", "base_precision_bits", 8), "base_precision_bits");

    const json& arr = r.object(r.need(root, "", "array"), "array", {"dims", "energy_per_op", "ops_per_mac", "lanes", "reload"});
    const json& dims = r.array(r.need(arr, "array", "dims"), "array.dims");
    for (size_t i = 0; i < dims.size(); ++i) {
        const auto f = Reader::at("array.dims", i);
        r.object(dims[i], f, {"name", "size"});
        a.array.dims.push_back({r.string(r.need(dims[i], f, "name"), f + ".name"),
                                r.integer(r.need(dims[i], f, "size"), f + ".size")});
    }
    a.array.energy_per_op = r.number(r.need(arr, "array", "energy_per_op"), "array.energy_per_op");
    a.array.ops_per_mac = to_int(r, r.integer_or(arr, "array", "ops_per_mac", 2), "array.ops_per_mac");
    a.array.lanes = r.number_or(arr, "array", "lanes", 1.0);
    if (const json* v = r.find(arr, "reload")) {
        r.object(*v, "array.reload", {"operand", "cycles_per_tile", "overlapped"});
        ArrayReload rl;
        rl.operand = r.string(r.need(*v, "array.reload", "operand"), "array.reload.operand");
        rl.cycles_per_tile = r.number(r.need(*v, "array.reload", "cycles_per_tile"), "array.reload.cycles_per_tile");
        rl.overlapped = r.boolean_or(*v, "array.reload", "overlapped", true);
        a.array.reload = rl;
    }

    const json& levels = r.array(r.need(root, "", "levels"), "levels");
    for (size_t i = 0; i < levels.size(); ++i) {
        const auto f = Reader::at("levels", i);
        r.object(levels[i], f, {"name", "bandwidth", "energy_per_byte", "capacity"});
        MemoryLevel l;
        l.name = r.string(r.need(levels[i], f, "name"), f + ".name");
        l.bandwidth = r.number(r.need(levels[i], f, "bandwidth"), f + ".bandwidth");
        l.energy_per_byte = r.number(r.need(levels[i], f, "energy_per_byte"), f + ".energy_per_byte");
        if (const json* c = r.find(levels[i], "capacity")) l.capacity = r.number(*c, f + ".capacity");
        l.level_index = static_cast<int>(i) + 1;
        a.levels.push_back(std::move(l));
    }
    return a;
}

json arch_to_json(const ArchSpec& a) {
    json j;
    j["name"] = a.name;
    j["clock_hz"] = a.clock_hz;
    j["latency_overlap"] = to_string(a.latency_overlap);
    j["cores"] = a.cores;
    j["base_precision_bits"] = a.base_precision_bits;
    json arr;
    arr["dims"] = json::array();
    for (const auto& d : a.array.dims) arr["dims"].push_back({{"name", d.name}, {"size", d.size}});
    arr["energy_per_op"] = a.array.energy_per_op;
    arr["ops_per_mac"] = a.array.ops_per_mac;
    arr["lanes"] = a.array.lanes;
    if (a.array.reload) {
        arr["reload"] = {{"operand", a.array.reload->operand},
                         {"cycles_per_tile", a.array.reload->cycles_per_tile},
                         {"overlapped", a.array.reload->overlapped}};
    }
    j["array"] = arr;
    j["levels"] = json::array();
    for (const auto& l : a.levels) {
        json lj{{"name", l.name}, {"bandwidth", l.bandwidth}, {"energy_per_byte", l.energy_per_byte}};
        if (l.capacity) lj["capacity"] = *l.capacity;
        j["levels"].push_back(lj);
    }
    return j;
}

// ---------------------------------------------------------------------------
// Workload
// ---------------------------------------------------------------------------

WorkloadSpec workload_from_json(const Reader& r, const json& root) {
    r.object(root, "", {"name", "dims", "operands"});
    WorkloadSpec w;
    w.name = r.string(r.need(root, "", "name"), "name");
    const json& dims = r.array(r.need(root, "", "dims"), "dims");
    for (size_t i = 0; i < dims.size(); ++i) {
        const auto f = Reader::at("dims", i);
        r.object(dims[i], f, {"name", "size"});
        w.dims.push_back({r.string(r.need(dims[i], f, "name"), f + ".name"),
                          r.integer(r.need(dims[i], f, "size"), f + ".size")});
    }
    const json& ops = r.array(r.need(root, "", "operands"), "operands");
    for (size_t i = 0; i < ops.size(); ++i) {
        const auto f = Reader::at("operands", i);
        const json& o = r.object(ops[i], f,
                                 {"name", "role", "relevant_dims", "precision_bits", "density", "accumulator_bits",
                                  "bytes_per_element"});
        OperandSpec op;
        op.name = r.string(r.need(o, f, "name"), f + ".name");
        const auto role = r.string(r.need(o, f, "role"), f + ".role");
        if (role == "input") op.role = OperandRole::input;
        else if (role == "output") op.role = OperandRole::output;
        else r.fail(f + ".role", "expected \"input\" or \"output\", got \"" + role + "\"");
        const json& rel = r.array(r.need(o, f, "relevant_dims"), f + ".relevant_dims");
        for (size_t k = 0; k < rel.size(); ++k) op.relevant_dims.push_back(r.string(rel[k], Reader::at(f + ".relevant_dims", k)));
        op.precision_bits = to_int(r, r.integer_or(o, f, "precision_bits", 8), f + ".precision_bits");
        op.density = r.number_or(o, f, "density", 1.0);
        if (const json* v = r.find(o, "accumulator_bits")) {
            op.accumulator_bits = to_int(r, r.integer(*v, f + ".accumulator_bits"), f + ".accumulator_bits");
        }
        if (const json* v = r.find(o, "bytes_per_element")) op.bytes_per_element = r.number(*v, f + ".bytes_per_element");
        w.operands.push_back(std::move(op));
    }
    return w;
}

json workload_to_json(const WorkloadSpec& w) {
    json j;
    j["name"] = w.name;
    j["dims"] = json::array();
    for (const auto& d : w.dims) j["dims"].push_back({{"name", d.name}, {"size", d.size}});
    j["operands"] = json::array();
    for (const auto& op : w.operands) {
        json o{{"name", op.name}, {"role", to_string(op.role)}, {"relevant_dims", op.relevant_dims},
               {"precision_bits", op.precision_bits}, {"density", op.density}};
        if (op.accumulator_bits) o["accumulator_bits"] = *op.accumulator_bits;
        if (op.bytes_per_element) o["bytes_per_element"] = *op.bytes_per_element;
        j["operands"].push_back(o);
    }
    return j;
}

// ---------------------------------------------------------------------------
// Mapping
// ---------------------------------------------------------------------------

MappingSpec mapping_from_json(const Reader& r, const json& root) {
    r.object(root, "", {"spatial", "temporal", "core_split"});
    MappingSpec m;
    if (const json* sp = r.find(root, "spatial")) {
        r.array(*sp, "spatial");
        for (size_t i = 0; i < sp->size(); ++i) {
            const auto f = Reader::at("spatial", i);
            const json& s = r.object((*sp)[i], f, {"axis", "dim", "factor"});
            m.spatial.push_back({r.string(r.need(s, f, "axis"), f + ".axis"), r.string(r.need(s, f, "dim"), f + ".dim"),
                                 r.integer(r.need(s, f, "factor"), f + ".factor")});
        }
    }
    const json& tm = r.array(r.need(root, "", "temporal"), "temporal");
    for (size_t l = 0; l < tm.size(); ++l) {
        const auto fl = Reader::at("temporal", l);
        r.array(tm[l], fl);
        std::vector<TemporalLoop> loops;
        for (size_t k = 0; k < tm[l].size(); ++k) {
            const auto f = Reader::at(fl, k);
            const json& t = r.object(tm[l][k], f, {"dim", "trip"});
            loops.push_back({r.string(r.need(t, f, "dim"), f + ".dim"), r.integer(r.need(t, f, "trip"), f + ".trip")});
        }
        m.temporal.push_back(std::move(loops));
    }
    if (const json* cs = r.find(root, "core_split")) {
        r.object(*cs, "core_split", {"dim", "factor"});
        m.core_split = CoreSplit{r.string(r.need(*cs, "core_split", "dim"), "core_split.dim"),
                                 r.integer(r.need(*cs, "core_split", "factor"), "core_split.factor")};
    }
    return m;
}

json mapping_to_json(const MappingSpec& m) {
    json j;
    j["spatial"] = json::array();
    for (const auto& s : m.spatial) j["spatial"].push_back({{"axis", s.axis}, {"dim", s.dim}, {"factor", s.factor}});
    j["temporal"] = json::array();
    for (const auto& level : m.temporal) {
        json lj = json::array();
        for (const auto& t : level) lj.push_back({{"dim", t.dim}, {"trip", t.trip}});
        j["temporal"].push_back(lj);
    }
    if (m.core_split) j["core_split"] = {{"dim", m.core_split->dim}, {"factor", m.core_split->factor}};
    return j;
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

TransformPass transform_from_json(const Reader& r, const json& v, const std::string& f) {
    if (!v.is_object()) r.fail(f, "expected an object");
    const auto type = r.string(r.need(v, f, "type"), f + ".type");
    if (type == "quantization") {
        r.object(v, f,
                 {"type", "precision_bits", "block_size", "block_metadata_bits", "compute_scaling_exponent",
                  "throughput_scaling", "weight_operand", "serial_overhead_cycles", "fixed_overhead_energy"});
        QuantConfig q;
        if (const json* p = r.find(v, "precision_bits")) q.precision_bits = int_map(r, *p, f + ".precision_bits");
        q.block_size = to_int(r, r.integer_or(v, f, "block_size", 1), f + ".block_size");
        q.block_metadata_bits = to_int(r, r.integer_or(v, f, "block_metadata_bits", 0), f + ".block_metadata_bits");
        q.compute_scaling_exponent = r.number_or(v, f, "compute_scaling_exponent", 1.0);
        const auto mode = r.string_or(v, f, "throughput_scaling", "linear");
        if (mode == "linear") q.throughput_scaling = ThroughputScaling::linear;
        else if (mode == "bit-serial-weights") q.throughput_scaling = ThroughputScaling::bit_serial_weights;
        else r.fail(f + ".throughput_scaling", "expected \"linear\" or \"bit-serial-weights\"");
        q.weight_operand = r.string_or(v, f, "weight_operand", "W");
        q.serial_overhead_cycles = to_int(r, r.integer_or(v, f, "serial_overhead_cycles", 0), f + ".serial_overhead_cycles");
        q.fixed_overhead_energy = r.number_or(v, f, "fixed_overhead_energy", 0.0);
        return q;
    }
    if (type == "sparsity") {
        r.object(v, f, {"type", "mode", "density", "n", "m", "index_bits", "utilization_penalty"});
        SparsityConfig s;
        const auto mode = r.string_or(v, f, "mode", "dense");
        if (mode == "dense") s.mode = SparsityMode::dense;
        else if (mode == "unstructured") s.mode = SparsityMode::unstructured;
        else if (mode == "structured") s.mode = SparsityMode::structured;
        else r.fail(f + ".mode", "expected \"dense\", \"unstructured\" or \"structured\"");
        if (const json* d = r.find(v, "density")) s.density = num_map(r, *d, f + ".density");
        s.n = to_int(r, r.integer_or(v, f, "n", 2), f + ".n");
        s.m = to_int(r, r.integer_or(v, f, "m", 4), f + ".m");
        s.index_bits = to_int(r, r.integer_or(v, f, "index_bits", 32), f + ".index_bits");
        s.utilization_penalty = r.number_or(v, f, "utilization_penalty", 1.0);
        return s;
    }
    if (type == "imc") {
        r.object(v, f,
                 {"type", "rows", "cols", "input_bits", "weight_bits", "energy_per_column_op", "adc_overhead_fraction",
                  "weight_write_rows_per_cycle", "reload_overlapped", "weight_operand"});
        ImcMacro m;
        m.rows = r.integer(r.need(v, f, "rows"), f + ".rows");
        m.cols = r.integer(r.need(v, f, "cols"), f + ".cols");
        m.input_bits = to_int(r, r.integer_or(v, f, "input_bits", 1), f + ".input_bits");
        m.weight_bits = to_int(r, r.integer_or(v, f, "weight_bits", 1), f + ".weight_bits");
        m.energy_per_column_op = r.number(r.need(v, f, "energy_per_column_op"), f + ".energy_per_column_op");
        m.adc_overhead_fraction = r.number_or(v, f, "adc_overhead_fraction", 0.25);
        m.weight_write_rows_per_cycle = r.integer_or(v, f, "weight_write_rows_per_cycle", 1);
        m.reload_overlapped = r.boolean_or(v, f, "reload_overlapped", false);
        m.weight_operand = r.string_or(v, f, "weight_operand", "W");
        return m;
    }
    r.fail(f + ".type", "expected \"quantization\", \"sparsity\" or \"imc\", got \"" + type + "\"");
}

json transform_to_json(const TransformPass& pass) {
    json j;
    if (const auto* q = std::get_if<QuantConfig>(&pass)) {
        j["type"] = "quantization";
        j["precision_bits"] = json::object();
        for (const auto& [k, v] : q->precision_bits) j["precision_bits"][k] = v;
        j["block_size"] = q->block_size;
        j["block_metadata_bits"] = q->block_metadata_bits;
        j["compute_scaling_exponent"] = q->compute_scaling_exponent;
        j["throughput_scaling"] = to_string(q->throughput_scaling);
        j["weight_operand"] = q->weight_operand;
        j["serial_overhead_cycles"] = q->serial_overhead_cycles;
        j["fixed_overhead_energy"] = q->fixed_overhead_energy;
    } else if (const auto* s = std::get_if<SparsityConfig>(&pass)) {
        j["type"] = "sparsity";
        j["mode"] = to_string(s->mode);
        j["density"] = json::object();
        for (const auto& [k, v] : s->density) j["density"][k] = v;
        j["n"] = s->n;
        j["m"] = s->m;
        j["index_bits"] = s->index_bits;
        j["utilization_penalty"] = s->utilization_penalty;
    } else {
        const auto& m = std::get<ImcMacro>(pass);
        j["type"] = "imc";
        j["rows"] = m.rows;
        j["cols"] = m.cols;
        j["input_bits"] = m.input_bits;
        j["weight_bits"] = m.weight_bits;
        j["energy_per_column_op"] = m.energy_per_column_op;
        j["adc_overhead_fraction"] = m.adc_overhead_fraction;
        j["weight_write_rows_per_cycle"] = m.weight_write_rows_per_cycle;
        j["reload_overlapped"] = m.reload_overlapped;
        j["weight_operand"] = m.weight_operand;
    }
    return j;
}

Scenario scenario_from_json(const Reader& r, const json& root) {
    r.object(root, "", {"label", "arch", "workload", "mapping", "profile", "transforms", "overlap", "reference_level"});
    Scenario s;
    s.label = r.string(r.need(root, "", "label"), "label");
    s.arch = r.string(r.need(root, "", "arch"), "arch");
    s.workload = r.string_or(root, "", "workload", "");
    s.mapping = r.string_or(root, "", "mapping", "");
    if (const json* p = r.find(root, "profile")) {
        r.object(*p, "profile", {"ops", "ai_ref", "ai_ratios"});
        ProfileSpec ps;
        ps.ops = r.number(r.need(*p, "profile", "ops"), "profile.ops");
        ps.ai_ref = r.number(r.need(*p, "profile", "ai_ref"), "profile.ai_ref");
        const json& ratios = r.array(r.need(*p, "profile", "ai_ratios"), "profile.ai_ratios");
        for (size_t i = 0; i < ratios.size(); ++i) ps.ai_ratios.push_back(r.number(ratios[i], Reader::at("profile.ai_ratios", i)));
        s.profile = ps;
    }
    if (s.profile && (!s.workload.empty() || !s.mapping.empty())) {
        r.fail("profile", "give either a profile or a workload and mapping, not both");
    }
    if (!s.profile && (s.workload.empty() || s.mapping.empty())) {
        r.fail(s.workload.empty() ? "workload" : "mapping", "required field is missing");
    }
    if (const json* t = r.find(root, "transforms")) {
        r.array(*t, "transforms");
        for (size_t i = 0; i < t->size(); ++i) s.transforms.push_back(transform_from_json(r, (*t)[i], Reader::at("transforms", i)));
    }
    if (const json* v = r.find(root, "overlap")) s.overlap = parse_overlap(r, *v, "overlap");
    s.reference_level = to_int(r, r.integer_or(root, "", "reference_level", 0), "reference_level");
    return s;
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["label"] = s.label;
    j["arch"] = s.arch;
    if (!s.workload.empty()) j["workload"] = s.workload;
    if (!s.mapping.empty()) j["mapping"] = s.mapping;
    if (s.profile) j["profile"] = {{"ops", s.profile->ops}, {"ai_ref", s.profile->ai_ref}, {"ai_ratios", s.profile->ai_ratios}};
    if (!s.transforms.empty()) {
        j["transforms"] = json::array();
        for (const auto& t : s.transforms) j["transforms"].push_back(transform_to_json(t));
    }
    if (s.overlap) j["overlap"] = to_string(*s.overlap);
    j["reference_level"] = s.reference_level;
    return j;
}

template <typename T, typename F>
T parse_with(const std::string& text, const std::string& path, F&& from_json) {
    const json root = parse_text(text, path);
    return from_json(Reader(path), root);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

// ============================================================================
// Public API
// ============================================================================

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(ConfigError::Kind::syntax, path.string(), "", "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ArchSpec parse_arch(const std::string& text, const std::string& path) {
    auto a = parse_with<ArchSpec>(text, path, arch_from_json);
    check_invariants(validate(a), path);
    return a;
}

WorkloadSpec parse_workload(const std::string& text, const std::string& path) {
    auto w = parse_with<WorkloadSpec>(text, path, workload_from_json);
    check_invariants(validate(w), path);
    return w;
}

MappingSpec parse_mapping(const std::string& text, const std::string& path) {
    return parse_with<MappingSpec>(text, path, mapping_from_json);
}

Scenario parse_scenario(const std::string& text, const std::string& path) {
    return parse_with<Scenario>(text, path, scenario_from_json);
}

ArchSpec load_arch(const std::filesystem::path& p) { return parse_arch(read_file(p), p.string()); }
WorkloadSpec load_workload(const std::filesystem::path& p) { return parse_workload(read_file(p), p.string()); }
MappingSpec load_mapping(const std::filesystem::path& p) { return parse_mapping(read_file(p), p.string()); }

Scenario load_scenario(const std::filesystem::path& p) {
    auto s = parse_scenario(read_file(p), p.string());
    s.base_dir = p.parent_path();
    return s;
}

std::string emit_arch(const ArchSpec& a) { return dump(arch_to_json(a)); }
std::string emit_workload(const WorkloadSpec& w) { return dump(workload_to_json(w)); }
std::string emit_mapping(const MappingSpec& m) { return dump(mapping_to_json(m)); }
std::string emit_scenario(const Scenario& s) { return dump(scenario_to_json(s)); }

Scenario make_scenario(const std::filesystem::path& arch, const std::filesystem::path& workload,
                       const std::filesystem::path& mapping, const std::string& label) {
    Scenario s;
    s.label = label;
    s.arch = std::filesystem::absolute(arch).string();
    s.workload = std::filesystem::absolute(workload).string();
    s.mapping = std::filesystem::absolute(mapping).string();
    return s;
}

ResolvedScenario resolve(const Scenario& s) {
    auto locate = [&](const std::string& rel) { return s.base_dir / rel; };

    ResolvedScenario out;
    out.label = s.label;
    out.arch = load_arch(locate(s.arch));
    out.options.overlap = s.overlap;
    out.options.reference_level = s.reference_level;

    if (s.profile) {
        const std::string where = s.label.empty() ? "<scenario>" : s.label;
        if (!s.transforms.empty()) {
            throw ConfigError(ConfigError::Kind::invariant, where, "transforms", "transforms need a workload and mapping");
        }
        const auto& p = *s.profile;
        if (p.ai_ratios.size() != out.arch.levels.size()) {
            throw ConfigError(ConfigError::Kind::invariant, where, "profile.ai_ratios",
                              "expected one ratio per memory level (" + std::to_string(out.arch.levels.size()) + ")");
        }
        if (!(p.ops > 0) || !(p.ai_ref > 0)) {
            throw ConfigError(ConfigError::Kind::invariant, where, "profile", "ops and ai_ref must be > 0");
        }
        const int ref = resolve_reference_level(out.arch, s.reference_level);
        if (p.ai_ratios[static_cast<size_t>(ref - 1)] != 1.0) {
            throw ConfigError(ConfigError::Kind::invariant, where, "profile.ai_ratios",
                              "the reference level L" + std::to_string(ref) + " must have ratio 1");
        }
        std::vector<double> bytes;
        for (double r : p.ai_ratios) {
            if (!(r > 0)) throw ConfigError(ConfigError::Kind::invariant, where, "profile.ai_ratios", "ratios must be > 0");
            bytes.push_back(p.ops / (r * p.ai_ref));
        }
        out.profile = synthetic_profile(p.ops, bytes);
        return out;
    }

    WorkloadSpec wl = load_workload(locate(s.workload));
    MappingSpec map = load_mapping(locate(s.mapping));
    for (const auto& pass : s.transforms) {
        if (const auto* q = std::get_if<QuantConfig>(&pass)) {
            auto qm = apply_quantization(out.arch, wl, *q);
            out.arch = std::move(qm.arch);
            wl = std::move(qm.workload);
        } else if (const auto* sp = std::get_if<SparsityConfig>(&pass)) {
            auto sm = apply_sparsity(wl, *sp);
            wl = std::move(sm.workload);
            out.options.bandwidth_utilization *= sm.bandwidth_utilization;
        } else {
            const auto imc = imc_macro_as_arch(std::get<ImcMacro>(pass), out.arch.levels, out.arch.clock_hz);
            auto v = check_imc_mapping(imc, wl, map);
            if (!v.empty()) throw InvalidMapping(std::move(v));
            out.arch = imc.arch;
        }
    }
    out.workload = std::move(wl);
    out.mapping = std::move(map);
    return out;
}

}  // namespace rlab

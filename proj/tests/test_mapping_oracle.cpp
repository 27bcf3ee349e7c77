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

#include "catch2/catch_amalgamated.hpp"

#include "rlab/mapping_engine.hpp"
#include "rlab/oracle.hpp"
#include "support.hpp"

using namespace rlab;
using namespace rlab::testing;

namespace {

// Compares analytic and enumerated counts; returns a mismatch description or "".
std::string compare_counts(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map) {
    const auto analytic = count_accesses(arch, wl, map);
    const auto oracle = enumerate_accesses(arch, wl, map);
    for (int l = 1; l <= static_cast<int>(arch.levels.size()); ++l) {
        for (const auto& op : wl.operands) {
            const auto* a = analytic.levels[l - 1].find(op.name);
            const auto& o = oracle.count(l, op.name);
            if (a->fetch_events * a->instances != o.events ||
                a->partial_sum_reads * a->instances != o.partial_reads || a->elements_moved != o.elements ||
                a->bytes_moved != o.bytes) {
                return "L" + std::to_string(l) + " " + op.name + ": analytic events " +
                       std::to_string(a->fetch_events * a->instances) + " reads " +
                       std::to_string(a->partial_sum_reads * a->instances) + " elements " +
                       std::to_string(a->elements_moved) + " vs oracle " + std::to_string(o.events) + "/" +
                       std::to_string(o.partial_reads) + "/" + std::to_string(o.elements) + " for " +
                       describe(map);
            }
        }
    }
    return "";
}

ArchSpec one_level_arch() {
    ArchSpec a = two_level_arch();
    a.levels.resize(1);
    return a;
}

}  // namespace

TEST_CASE("oracle hand-traced 2x2x2 GEMM", "[oracle]") {
    // Nest b (outer), k, c (inner), everything at the only level. Hand trace:
    // W[k,c] and I[b,c] change on every one of the 8 steps, O[b,k] on every
    // change of (b,k), i.e. 4 times.
    const auto arch = one_level_arch();
    const auto wl = gemm(2, 2, 2);
    MappingSpec m;
    m.temporal = {{{"c", 2}, {"k", 2}, {"b", 2}}};

    const auto trace = enumerate_accesses(arch, wl, m);
    CHECK(trace.count(1, "W").events == 8);
    CHECK(trace.count(1, "I").events == 8);
    CHECK(trace.count(1, "O").events == 4);
    CHECK(trace.count(1, "O").partial_reads == 0);
    CHECK(compare_counts(arch, wl, m).empty());
}

TEST_CASE("oracle with all relevant dims at L1 fetches once at L2", "[oracle]") {
    const auto arch = two_level_arch();
    const auto wl = gemm(2, 2, 2);
    MappingSpec m;
    m.temporal = {{{"c", 2}, {"k", 2}}, {{"b", 2}}};
    const auto trace = enumerate_accesses(arch, wl, m);
    CHECK(trace.count(2, "W").events == 1);
    CHECK(trace.count(2, "W").elements == 4);
    CHECK(compare_counts(arch, wl, m).empty());
}

TEST_CASE("analytic counts equal enumeration for every small GEMM mapping", "[oracle][exhaustive]") {
    const auto arch = two_level_arch();
    int64_t checked = 0;
    for (int64_t b : {1, 2, 4}) {
        for (int64_t k : {1, 2, 4}) {
            for (int64_t c : {1, 2, 4}) {
                const auto wl = gemm(b, k, c);
                for (const auto& m : exhaustive_two_level_mappings(wl)) {
                    const auto diff = compare_counts(arch, wl, m);
                    if (!diff.empty()) FAIL(diff);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked == 7776);
}

TEST_CASE("analytic counts equal enumeration with spatial unrolls and cores", "[oracle]") {
    const auto arch = two_level_arch(2, 2, 2);
    const auto wl = gemm(4, 4, 8);

    std::vector<MappingSpec> maps;
    for (const char* split : {"b", "k", "c"}) {
        MappingSpec m;
        m.spatial = {{"rows", "c", 2}, {"cols", "k", 2}};
        m.core_split = CoreSplit{split, 2};
        const int64_t bt = std::string(split) == "b" ? 2 : 4;
        const int64_t kt = std::string(split) == "k" ? 1 : 2;
        const int64_t ct = std::string(split) == "c" ? 2 : 4;
        m.temporal = {{{"c", ct}}, {{"k", kt}, {"b", bt}}};
        maps.push_back(m);
        m.temporal = {{{"b", bt}}, {{"c", ct}, {"k", kt}}};
        maps.push_back(m);
        m.temporal = {{}, {{"b", bt}, {"c", ct}, {"k", kt}}};
        maps.push_back(m);
    }
    for (const auto& m : maps) {
        const auto diff = compare_counts(arch, wl, m);
        if (!diff.empty()) FAIL(diff);
    }
}

TEST_CASE("output partial sums are read back when reduction sits outside", "[mapping]") {
    const auto arch = two_level_arch();
    const auto wl = gemm(2, 4, 4);
    MappingSpec m;
    // c outside k at L2: every O tile is revisited once per c.
    m.temporal = {{{"k", 2}, {"b", 2}, {"c", 2}}, {{"k", 2}, {"c", 2}}};
    const auto p = count_accesses(arch, wl, m);
    const auto& o = *p.levels[1].find("O");
    const auto& oracle = enumerate_accesses(arch, wl, m).count(2, "O");
    CHECK(o.fetch_events == oracle.events);
    CHECK(o.partial_sum_reads == oracle.partial_reads);
    CHECK(o.partial_sum_reads > 0);
}

TEST_CASE("swapping adjacent loops relevant to every operand keeps counts", "[mapping]") {
    auto arch = two_level_arch();
    WorkloadSpec wl;
    wl.dims = {{"x", 2}, {"y", 4}, {"z", 2}};
    wl.operands = {{"A", OperandRole::input, {"x", "y", "z"}},
                   {"B", OperandRole::input, {"x", "y"}},
                   {"O", OperandRole::output, {"x", "y"}}};
    MappingSpec m1;
    m1.temporal = {{{"z", 2}}, {{"x", 2}, {"y", 4}}};
    MappingSpec m2 = m1;
    std::swap(m2.temporal[1][0], m2.temporal[1][1]);

    CHECK(count_accesses(arch, wl, m1) == count_accesses(arch, wl, m2));
    CHECK(compare_counts(arch, wl, m1).empty());
    CHECK(compare_counts(arch, wl, m2).empty());
}

TEST_CASE("relevant-trip product is a lower bound met with irrelevant loops innermost", "[mapping]") {
    const auto arch = two_level_arch();
    const auto wl = gemm(4, 4, 4);
    for (const auto& m : exhaustive_two_level_mappings(wl)) {
        const auto p = count_accesses(arch, wl, m);
        for (const auto& op : wl.operands) {
            int64_t distinct = 1;
            for (const auto& t : m.temporal[1]) {
                if (op.is_relevant(t.dim)) distinct *= t.trip;
            }
            const int64_t events = p.levels[1].find(op.name)->fetch_events;
            CHECK(events >= distinct);
            // Irrelevant loops with trip > 1 all inside the relevant ones.
            bool relevant_seen = false;
            bool inner_only = true;
            for (const auto& t : m.temporal[1]) {  // innermost first
                if (t.trip == 1) continue;
                if (op.is_relevant(t.dim)) relevant_seen = true;
                else if (relevant_seen) inner_only = false;
            }
            if (inner_only) CHECK(events == distinct);
        }
    }
}

TEST_CASE("stationarity follows the innermost loop", "[mapping]") {
    const auto wl = gemm(16, 256, 256);
    MappingSpec m;
    m.spatial = {{"rows", "c", 256}, {"cols", "k", 256}};
    m.temporal = {{{"b", 16}}};
    const auto st = derive_stationarity(wl, m, 1);
    REQUIRE(st[0].has_value());
    CHECK(*st[0] == "W");

    MappingSpec os;
    os.temporal = {{{"c", 4}, {"k", 2}}};
    CHECK(derive_stationarity(gemm(1, 2, 4), os, 1)[0] == std::optional<std::string>("O"));
}

TEST_CASE("enumeration is deterministic and capped", "[oracle]") {
    const auto arch = two_level_arch();
    const auto wl = gemm(4, 4, 4);
    MappingSpec m;
    m.temporal = {{{"c", 2}, {"k", 2}}, {{"b", 4}, {"c", 2}, {"k", 2}}};
    EnumerationOptions opt;
    opt.record_events = true;
    const auto a = enumerate_accesses(arch, wl, m, opt);
    const auto b = enumerate_accesses(arch, wl, m, opt);
    CHECK(a.counts == b.counts);
    CHECK(a.events.size() == b.events.size());

    double total = 0;
    for (const auto& e : a.events) total += e.bytes;
    double sum = 0;
    for (double x : a.level_bytes) sum += x;
    CHECK(total == sum);

    opt.iteration_cap = 32;
    CHECK_THROWS_AS(enumerate_accesses(arch, wl, m, opt), IterationCapExceeded);
}

TEST_CASE("simulate_cycles: pure copy runs at the level bandwidth", "[sim]") {
    ArchSpec a = two_level_arch();
    a.levels.resize(1);
    a.levels[0].bandwidth = 8;
    std::vector<TileDemand> tiles(10, TileDemand{{100.0}, 0.0, 0.0});
    const auto r = simulate_cycles(a, tiles, 1.0, OverlapMode::overlapped);
    CHECK(r.cycles == 1000 / 8);
}

TEST_CASE("simulate_cycles: serialized mode is the busy-cycle sum", "[sim]") {
    const auto arch = fig3_arch();
    std::vector<TileDemand> tiles;
    for (int t = 0; t < 7; ++t) tiles.push_back({{300.0 + t, 40.0, 9.0 * t}, 1000.0, 0.0});
    const double rate = 2048;
    const auto r = simulate_cycles(arch, tiles, rate, OverlapMode::serialized);

    int64_t expected = 0;
    for (const auto& t : tiles) {
        for (size_t i = 0; i < 3; ++i) {
            expected += static_cast<int64_t>(std::ceil(t.level_bytes[i] / arch.levels[i].bandwidth));
        }
        expected += static_cast<int64_t>(std::ceil(t.ops / rate));
    }
    CHECK(r.cycles == expected);
}

TEST_CASE("simulate_cycles: regression stream reaches 16 cycles per tile", "[sim]") {
    const auto arch = fig3_arch();
    // ai = 16 at L2, L1 at ai/16, L3 at 16 ai.
    const TileDemand tile{{2048.0, 128.0, 8.0}, 2048.0, 0.0};
    const double rate = arch.peak_ops_per_cycle();
    auto run = [&](size_t n) {
        return simulate_cycles(arch, std::vector<TileDemand>(n, tile), rate, OverlapMode::overlapped).cycles;
    };
    CHECK(run(65) - run(64) == 16);
    CHECK(run(101) - run(100) == 16);
}

TEST_CASE("simulate_cycles on a mapping tracks the overlapped max", "[sim]") {
    auto arch = two_level_arch(4, 4);
    const auto wl = gemm(64, 16, 16);
    MappingSpec m;
    m.spatial = {{"rows", "c", 4}, {"cols", "k", 4}};
    m.temporal = {{{"c", 4}}, {{"b", 64}, {"k", 4}}};
    const auto trace = enumerate_accesses(arch, wl, m);
    REQUIRE(trace.steps >= 64);

    const auto sim = simulate_cycles(arch, wl, m, OverlapMode::overlapped);
    double bound = wl.op_count() / trace.ops_per_cycle_per_step;
    for (size_t i = 0; i < arch.levels.size(); ++i) {
        bound = std::max(bound, trace.level_bytes[i] / arch.levels[i].bandwidth);
    }
    CHECK(static_cast<double>(sim.cycles) >= bound);
    CHECK(static_cast<double>(sim.cycles) <= bound * 1.02);
}

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

#include "rlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace rlab {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::fetch: return "fetch";
        case EventKind::write_back: return "write_back";
        case EventKind::partial_read: return "partial_read";
    }
    return "?";
}

const OperandCount& EnumerationTrace::count(int level_index, const std::string& operand) const {
    for (const auto& c : counts.at(static_cast<size_t>(level_index - 1))) {
        if (c.operand == operand) return c;
    }
    throw std::out_of_range("no count for operand " + operand);
}

namespace {

struct NestLoop {
    std::string dim;
    int64_t trip;
    int level;
};

// One way a dim coordinate is built up: value * stride, value taken from a nest
// loop index, the core index or a spatial index.
struct Digit {
    enum Source { loop, core, spatial } source;
    size_t slot;
    int64_t stride;
};

int64_t checked_mul(int64_t a, int64_t b, int64_t cap) {
    if (a > cap / std::max<int64_t>(b, 1)) throw IterationCapExceeded("iteration space exceeds the cap of " + std::to_string(cap));
    return a * b;
}

// Buffer state of one operand at one boundary for one core (or for all cores).
// first/last hold, per element code, the steps of its first and last use in the
// current block; seen marks which block they belong to.
struct Buffer {
    std::vector<int64_t> touched;
    std::vector<int64_t> seen;
    std::vector<int64_t> first;
    std::vector<int64_t> last;
    int64_t serial = 0;
    std::vector<int64_t> resident;  ///< sorted codes of the held tile
    std::vector<int64_t> resident_last;
    bool has_tile = false;
    int64_t block_start = 0;

    void use(int64_t code, int64_t step) {
        const auto c = static_cast<size_t>(code);
        if (seen[c] != serial) {
            seen[c] = serial;
            first[c] = step;
            touched.push_back(code);
        }
        last[c] = step;
    }
};

class Enumerator {
public:
    Enumerator(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map, const EnumerationOptions& opt)
        : arch_(arch), wl_(wl), map_(map), opt_(opt), n_(static_cast<int>(arch.levels.size())) {}

    EnumerationTrace run() {
        build_nest();
        build_digits();
        build_codes();

        trace_.counts.assign(static_cast<size_t>(n_), {});
        for (auto& level : trace_.counts) {
            for (const auto& op : wl_.operands) level.push_back({op.name, 0, 0, 0, 0.0});
        }
        trace_.level_bytes.assign(static_cast<size_t>(n_), 0.0);
        trace_.tiles.assign(static_cast<size_t>(trace_.steps), TileDemand{std::vector<double>(static_cast<size_t>(n_), 0.0), 0.0, 0.0});

        const size_t nops = wl_.operands.size();
        buffers_.assign(static_cast<size_t>(n_), std::vector<std::vector<Buffer>>(nops));
        written_.assign(static_cast<size_t>(n_), std::vector<std::vector<std::vector<char>>>(nops));
        for (int b = 1; b <= n_; ++b) {
            const size_t groups = b == 1 ? static_cast<size_t>(cores_) : 1;
            for (size_t k = 0; k < nops; ++k) {
                Buffer init;
                init.seen.assign(static_cast<size_t>(code_space_[k]), -1);
                init.first.assign(static_cast<size_t>(code_space_[k]), 0);
                init.last.assign(static_cast<size_t>(code_space_[k]), 0);
                buffers_[b - 1][k].assign(groups, init);
                written_[b - 1][k].assign(groups, std::vector<char>(static_cast<size_t>(code_space_[k]), 0));
            }
        }

        const double ops_per_step = wl_.effective_op_count() / static_cast<double>(trace_.steps);
        std::vector<int64_t> idx(nest_.size(), 0);
        std::vector<int64_t> prev;
        for (int64_t step = 0; step < trace_.steps; ++step) {
            for (int b = 1; b <= n_; ++b) {
                const size_t prefix = prefix_len_[b - 1];
                const bool new_block =
                    step > 0 && !std::equal(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(prefix), prev.begin());
                if (new_block) close_blocks(b, step);
                if (step == 0 || new_block) {
                    for (auto& per_op : buffers_[b - 1]) {
                        for (auto& buf : per_op) buf.block_start = step;
                    }
                }
            }
            touch(idx, step);
            trace_.tiles[static_cast<size_t>(step)].ops = ops_per_step;

            prev = idx;
            for (size_t i = nest_.size(); i-- > 0;) {
                if (++idx[i] < nest_[i].trip) break;
                idx[i] = 0;
            }
        }
        for (int b = 1; b <= n_; ++b) close_blocks(b, trace_.steps);
        for (int b = 1; b <= n_; ++b) flush_outputs(b);

        for (int b = 1; b <= n_; ++b) {
            for (const auto& c : trace_.counts[b - 1]) trace_.level_bytes[b - 1] += c.bytes;
        }
        return std::move(trace_);
    }

private:
    void build_nest() {
        for (int l = n_; l >= 1; --l) {
            const auto& loops = map_.loops_at(l);
            for (auto it = loops.rbegin(); it != loops.rend(); ++it) nest_.push_back({it->dim, it->trip, l});
        }
        prefix_len_.assign(static_cast<size_t>(n_), 0);
        for (int b = 1; b <= n_; ++b) {
            prefix_len_[b - 1] = static_cast<size_t>(
                std::count_if(nest_.begin(), nest_.end(), [&](const NestLoop& x) { return x.level >= b; }));
        }

        const int64_t cap = opt_.iteration_cap;
        int64_t steps = 1;
        for (const auto& x : nest_) steps = checked_mul(steps, x.trip, cap);
        cores_ = map_.core_split ? map_.core_split->factor : 1;
        int64_t points = cores_;
        for (const auto& s : map_.spatial) points = checked_mul(points, s.factor, cap);
        trace_.steps = steps;
        trace_.iterations = checked_mul(steps, points, cap);
        if (trace_.iterations > cap) {
            throw IterationCapExceeded("iteration space " + std::to_string(trace_.iterations) + " exceeds the cap of " +
                                       std::to_string(cap));
        }
        spatial_points_ = points / cores_;
        trace_.ops_per_cycle_per_step =
            arch_.array.ops_per_mac * arch_.array.lanes * static_cast<double>(points);
    }

    void build_digits() {
        for (const auto& d : wl_.dims) {
            std::vector<Digit> digits;
            int64_t stride = 1;
            for (size_t i = nest_.size(); i-- > 0;) {
                if (nest_[i].dim != d.name) continue;
                digits.push_back({Digit::loop, i, stride});
                stride *= nest_[i].trip;
            }
            if (map_.core_split && map_.core_split->dim == d.name) {
                digits.push_back({Digit::core, 0, stride});
                stride *= map_.core_split->factor;
            }
            for (size_t s = 0; s < map_.spatial.size(); ++s) {
                if (map_.spatial[s].dim != d.name) continue;
                digits.push_back({Digit::spatial, s, stride});
                stride *= map_.spatial[s].factor;
            }
            digits_.push_back(std::move(digits));
        }
    }

    // Operand coordinate -> dense code over its relevant dims.
    void build_codes() {
        for (const auto& op : wl_.operands) {
            std::vector<std::pair<size_t, int64_t>> terms;
            int64_t stride = 1;
            for (size_t d = 0; d < wl_.dims.size(); ++d) {
                if (!op.is_relevant(wl_.dims[d].name)) continue;
                terms.emplace_back(d, stride);
                stride *= wl_.dims[d].size;
            }
            code_terms_.push_back(std::move(terms));
            code_space_.push_back(stride);
        }
    }

    void touch(const std::vector<int64_t>& idx, int64_t step) {
        std::vector<int64_t> sidx(map_.spatial.size(), 0);
        std::vector<int64_t> coord(wl_.dims.size());
        for (int64_t core = 0; core < cores_; ++core) {
            std::fill(sidx.begin(), sidx.end(), 0);
            for (int64_t p = 0; p < spatial_points_; ++p) {
                for (size_t d = 0; d < wl_.dims.size(); ++d) {
                    int64_t c = 0;
                    for (const auto& g : digits_[d]) {
                        const int64_t v = g.source == Digit::loop ? idx[g.slot] : g.source == Digit::core ? core : sidx[g.slot];
                        c += v * g.stride;
                    }
                    coord[d] = c;
                }
                for (size_t k = 0; k < wl_.operands.size(); ++k) {
                    int64_t code = 0;
                    for (const auto& [d, stride] : code_terms_[k]) code += coord[d] * stride;
                    for (int b = 1; b <= n_; ++b) {
                        const size_t g = b == 1 ? static_cast<size_t>(core) : 0;
                        buffers_[b - 1][k][g].use(code, step);
                    }
                }
                for (size_t s = sidx.size(); s-- > 0;) {
                    if (++sidx[s] < map_.spatial[s].factor) break;
                    sidx[s] = 0;
                }
            }
        }
    }

    void record(int b, size_t k, EventKind kind, int64_t step, int64_t elements) {
        const auto& op = wl_.operands[k];
        const double bytes = static_cast<double>(elements) * wl_.bytes_per_element(op);
        auto& c = trace_.counts[b - 1][k];
        if (kind == EventKind::partial_read) {
            ++c.partial_reads;
        } else {
            ++c.events;
        }
        c.elements += elements;
        c.bytes += bytes;
        if (opt_.record_events) trace_.events.push_back({step, b, op.name, kind, elements, bytes});
    }

    // The simulator sees each element's transfer at the step that needs it:
    // fetches at first use, write-backs at last update.
    void charge(int b, size_t k, int64_t step) {
        trace_.tiles[static_cast<size_t>(step)].level_bytes[b - 1] += wl_.bytes_per_element(wl_.operands[k]);
    }

    void write_back(int b, size_t k, size_t g, Buffer& buf, int64_t step) {
        auto& written = written_[b - 1][k][g];
        for (size_t i = 0; i < buf.resident.size(); ++i) {
            written[static_cast<size_t>(buf.resident[i])] = 1;
            charge(b, k, buf.resident_last[i]);
        }
        record(b, k, EventKind::write_back, step, static_cast<int64_t>(buf.resident.size()));
    }

    void close_blocks(int b, int64_t next_step) {
        (void)next_step;
        const auto& reload = arch_.array.reload;
        for (size_t k = 0; k < wl_.operands.size(); ++k) {
            const auto& op = wl_.operands[k];
            bool reloaded = false;
            for (size_t g = 0; g < buffers_[b - 1][k].size(); ++g) {
                Buffer& buf = buffers_[b - 1][k][g];
                std::sort(buf.touched.begin(), buf.touched.end());
                const bool same = buf.has_tile && buf.touched == buf.resident;
                if (!same) {
                    const int64_t at = buf.block_start;
                    if (op.role == OperandRole::output) {
                        if (buf.has_tile) write_back(b, k, g, buf, at);
                        const auto& written = written_[b - 1][k][g];
                        int64_t again = 0;
                        for (int64_t code : buf.touched) {
                            if (!written[static_cast<size_t>(code)]) continue;
                            ++again;
                            charge(b, k, buf.first[static_cast<size_t>(code)]);
                        }
                        if (again > 0) record(b, k, EventKind::partial_read, at, again);
                    } else {
                        for (int64_t code : buf.touched) charge(b, k, buf.first[static_cast<size_t>(code)]);
                        record(b, k, EventKind::fetch, at, static_cast<int64_t>(buf.touched.size()));
                        if (b == 1 && reload && reload->operand == op.name) reloaded = true;
                    }
                    buf.resident.swap(buf.touched);
                    buf.has_tile = true;
                }
                buf.resident_last.resize(buf.resident.size());
                for (size_t i = 0; i < buf.resident.size(); ++i) {
                    buf.resident_last[i] = buf.last[static_cast<size_t>(buf.resident[i])];
                }
                buf.touched.clear();
                ++buf.serial;
            }
            if (reloaded && !reload->overlapped) {
                trace_.tiles[static_cast<size_t>(buffers_[b - 1][k].front().block_start)].compute_stall_cycles +=
                    reload->cycles_per_tile;
            }
        }
    }

    void flush_outputs(int b) {
        for (size_t k = 0; k < wl_.operands.size(); ++k) {
            if (wl_.operands[k].role != OperandRole::output) continue;
            for (size_t g = 0; g < buffers_[b - 1][k].size(); ++g) {
                Buffer& buf = buffers_[b - 1][k][g];
                if (buf.has_tile) write_back(b, k, g, buf, trace_.steps - 1);
            }
        }
    }

    const ArchSpec& arch_;
    const WorkloadSpec& wl_;
    const MappingSpec& map_;
    const EnumerationOptions& opt_;
    const int n_;

    std::vector<NestLoop> nest_;
    std::vector<size_t> prefix_len_;
    int64_t cores_ = 1;
    int64_t spatial_points_ = 1;
    std::vector<std::vector<Digit>> digits_;
    std::vector<std::vector<std::pair<size_t, int64_t>>> code_terms_;
    std::vector<int64_t> code_space_;
    // [boundary][operand][core or 0]
    std::vector<std::vector<std::vector<Buffer>>> buffers_;
    std::vector<std::vector<std::vector<std::vector<char>>>> written_;
    EnumerationTrace trace_;
};

}  // namespace

EnumerationTrace enumerate_accesses(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                                    const EnumerationOptions& options) {
    require_valid(arch, wl, map);
    return Enumerator(arch, wl, map, options).run();
}

void write_trace(std::ostream& os, const EnumerationTrace& trace, const ArchSpec& arch) {
    os << "cycle,level,operand,bytes\n";
    for (const auto& e : trace.events) {
        os << e.step << ',' << arch.levels.at(static_cast<size_t>(e.level - 1)).name << ',' << e.operand << ','
           << e.bytes << '\n';
    }
}

// ============================================================================
// Cycle simulation
// ============================================================================

namespace {

constexpr double kEps = 1e-9;

int64_t whole_cycles(double work) { return work <= kEps ? 0 : static_cast<int64_t>(std::ceil(work - kEps)); }

}  // namespace

SimulationResult simulate_cycles(const ArchSpec& arch, const std::vector<TileDemand>& tiles, double compute_rate,
                                 OverlapMode overlap, double bandwidth_utilization) {
    const size_t n = arch.levels.size();
    const size_t stages = n + 1;
    const size_t count = tiles.size();
    if (!(bandwidth_utilization > 0.0)) throw std::invalid_argument("bandwidth utilization must be > 0");

    // work[s][t] in cycles; stage 0 is the outermost level, stage n the array.
    std::vector<std::vector<double>> work(stages, std::vector<double>(count, 0.0));
    for (size_t t = 0; t < count; ++t) {
        if (tiles[t].level_bytes.size() != n) throw std::invalid_argument("tile demand does not match the hierarchy");
        for (size_t s = 0; s < n; ++s) {
            const auto& level = arch.levels[n - 1 - s];
            work[s][t] = tiles[t].level_bytes[n - 1 - s] / (level.bandwidth * bandwidth_utilization);
        }
        if (tiles[t].ops > 0 && !(compute_rate > 0)) throw std::invalid_argument("compute rate must be > 0");
        work[n][t] = (tiles[t].ops > 0 ? tiles[t].ops / compute_rate : 0.0) + tiles[t].compute_stall_cycles;
    }

    SimulationResult r;
    for (size_t s = 0; s < n; ++s) r.resources.push_back(arch.levels[n - 1 - s].name);
    r.resources.push_back("compute");
    r.busy_cycles.assign(stages, 0.0);

    if (overlap == OverlapMode::serialized) {
        for (size_t s = 0; s < stages; ++s) {
            int64_t busy = 0;
            for (size_t t = 0; t < count; ++t) busy += whole_cycles(work[s][t]);
            r.busy_cycles[s] = static_cast<double>(busy);
            r.cycles += busy;
        }
        return r;
    }

    for (size_t s = 0; s < stages; ++s) {
        for (size_t t = 0; t < count; ++t) r.busy_cycles[s] += work[s][t];
    }
    if (count == 0) return r;

    // Streaming flow shop. Stage s may have done at most as much of tile t as
    // the fraction of t that stage s - 1 had delivered by the end of the
    // previous cycle. Tiles pass each stage in order; spare capacity in a cycle
    // carries over to the next tile.
    std::vector<size_t> head(stages, 0);
    std::vector<double> done(stages, 0.0);
    std::vector<size_t> prev_head(stages, 0);
    std::vector<double> prev_done(stages, 0.0);
    auto delivered = [&](size_t s, size_t t) {
        if (prev_head[s] > t) return 1.0;
        if (prev_head[s] < t || work[s][t] <= kEps) return 0.0;
        return prev_done[s] / work[s][t];
    };
    auto settle = [&](size_t s) {
        while (head[s] < count && done[s] >= work[s][head[s]] - kEps && (s == 0 || delivered(s - 1, head[s]) >= 1.0)) {
            ++head[s];
            done[s] = 0.0;
        }
    };

    int64_t cycle = 0;
    int64_t last_busy = 0;
    settle(0);
    while (head[stages - 1] < count) {
        ++cycle;
        prev_head = head;
        prev_done = done;
        bool free_running = true;
        for (size_t s = 0; s < stages; ++s) {
            double capacity = 1.0;
            bool limited = false;
            settle(s);
            while (head[s] < count && capacity > kEps) {
                const size_t t = head[s];
                const double cap = s == 0 ? work[s][t] : work[s][t] * delivered(s - 1, t);
                const double take = std::min(capacity, cap - done[s]);
                if (take > kEps) {
                    done[s] += take;
                    capacity -= take;
                    last_busy = cycle;
                }
                const size_t before = head[s];
                settle(s);
                if (head[s] == before) {
                    limited = capacity > kEps;
                    break;
                }
            }
            if (head[s] < count && (limited || capacity > kEps)) free_running = false;
        }
        // Every unfinished stage ran at full rate without hitting an upstream
        // limit: the same holds for as long as no tile completes.
        if (free_running) {
            int64_t skip = -1;
            for (size_t s = 0; s < stages; ++s) {
                if (head[s] >= count) continue;
                const size_t t = head[s];
                const double cap = s == 0 ? work[s][t] : work[s][t] * delivered(s - 1, t);
                const int64_t k = static_cast<int64_t>(std::floor(std::min(cap, work[s][t]) - done[s] - kEps)) - 1;
                skip = skip < 0 ? k : std::min(skip, k);
            }
            if (skip > 0) {
                for (size_t s = 0; s < stages; ++s) {
                    if (head[s] < count) done[s] += static_cast<double>(skip);
                }
                cycle += skip;
                last_busy = cycle;
            }
        }
    }
    r.cycles = last_busy;
    return r;
}

SimulationResult simulate_cycles(const ArchSpec& arch, const WorkloadSpec& wl, const MappingSpec& map,
                                 OverlapMode overlap, double bandwidth_utilization, const EnumerationOptions& options) {
    const auto trace = enumerate_accesses(arch, wl, map, options);
    return simulate_cycles(arch, trace.tiles, trace.ops_per_cycle_per_step, overlap, bandwidth_utilization);
}

}  // namespace rlab

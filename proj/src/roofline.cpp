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

#include "rlab/roofline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_levels(const ArchSpec& arch, size_t n, const char* what) {
    if (n != arch.levels.size()) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(arch.levels.size()) +
                                    " levels, got " + std::to_string(n));
    }
}

// r * ai with r = inf meaning "this level never binds".
double level_ai(double ratio, double ai) { return std::isinf(ratio) ? kInf : ratio * ai; }

}  // namespace

const char* to_string(RooflineKind kind) { return kind == RooflineKind::throughput ? "throughput" : "energy"; }

double task_energy(const ArchSpec& arch, const AccessProfile& profile) {
    check_levels(arch, profile.levels.size(), "task_energy");
    double e = profile.op_count * arch.array.energy_per_op;
    for (size_t i = 0; i < arch.levels.size(); ++i) e += profile.levels[i].total_bytes * arch.levels[i].energy_per_byte;
    return e;
}

LatencyBreakdown task_latency(const ArchSpec& arch, const AccessProfile& profile, std::optional<OverlapMode> overlap) {
    Utilization ideal;
    ideal.compute_cycles = profile.op_count / arch.peak_ops_per_cycle();
    return effective_latency(arch, profile, ideal, overlap, 1.0);
}

LatencyBreakdown effective_latency(const ArchSpec& arch, const AccessProfile& profile, const Utilization& util,
                                   std::optional<OverlapMode> overlap, double bandwidth_utilization) {
    check_levels(arch, profile.levels.size(), "task_latency");
    LatencyBreakdown lb;
    lb.mode = overlap.value_or(arch.latency_overlap);
    lb.compute_cycles = util.compute_cycles;
    lb.stall_cycles = util.reload_cycles;

    const double array_busy = lb.compute_cycles + lb.stall_cycles;
    double worst = array_busy;
    double sum = array_busy;
    lb.limiter = kComputeLabel;
    // Ties go to compute, then to the innermost level.
    lb.level_cycles.resize(arch.levels.size());
    for (size_t i = 0; i < arch.levels.size(); ++i) {
        lb.level_cycles[i] = profile.levels[i].total_bytes / (arch.levels[i].bandwidth * bandwidth_utilization);
        sum += lb.level_cycles[i];
    }
    for (size_t i = 0; i < arch.levels.size(); ++i) {
        if (lb.level_cycles[i] > worst) {
            worst = lb.level_cycles[i];
            lb.limiter = arch.levels[i].name;
        }
    }
    lb.cycles = lb.mode == OverlapMode::overlapped ? worst : sum;
    lb.seconds = lb.cycles / arch.clock_hz;
    return lb;
}

std::vector<double> ai_ratios(const AccessProfile& profile, int reference_level) {
    const auto ai = arithmetic_intensity(profile);
    if (reference_level < 1 || reference_level > static_cast<int>(ai.size())) {
        throw std::invalid_argument("reference level L" + std::to_string(reference_level) + " does not exist");
    }
    const double ref = ai[static_cast<size_t>(reference_level - 1)];
    if (std::isinf(ref)) {
        throw std::invalid_argument("reference level L" + std::to_string(reference_level) + " moves no bytes");
    }
    std::vector<double> r;
    r.reserve(ai.size());
    for (double a : ai) r.push_back(a / ref);
    return r;
}

Ceiling throughput_ceiling(const ArchSpec& arch, std::span<const double> ratios, double ai_ref) {
    check_levels(arch, ratios.size(), "throughput_ceiling");
    Ceiling c{arch.peak_ops_per_cycle(), kComputeLabel};
    for (size_t i = 0; i < ratios.size(); ++i) {
        const double mem = level_ai(ratios[i], ai_ref) * arch.levels[i].bandwidth;
        if (mem < c.value) {
            c.value = mem;
            c.limiter = arch.levels[i].name;
        }
    }
    return c;
}

Ceiling energy_ceiling(const ArchSpec& arch, std::span<const double> ratios, double ai_ref) {
    check_levels(arch, ratios.size(), "energy_ceiling");
    double memory = 0.0;
    double largest = 0.0;
    std::string dominant;
    for (size_t i = 0; i < ratios.size(); ++i) {
        const double term = arch.levels[i].energy_per_byte / level_ai(ratios[i], ai_ref);
        memory += term;
        if (term > largest) {
            largest = term;
            dominant = arch.levels[i].name;
        }
    }
    const double per_op = arch.array.energy_per_op + memory;
    return {per_op > 0 ? 1.0 / per_op : kInf, memory > arch.array.energy_per_op ? dominant : kComputeLabel};
}

std::optional<Knee> throughput_knee(const ArchSpec& arch, std::span<const double> ratios) {
    check_levels(arch, ratios.size(), "throughput_knee");
    double slope = kInf;
    std::string label;
    for (size_t i = 0; i < ratios.size(); ++i) {
        const double s = level_ai(ratios[i], 1.0) * arch.levels[i].bandwidth;
        if (s < slope) {
            slope = s;
            label = arch.levels[i].name;
        }
    }
    if (std::isinf(slope)) return std::nullopt;
    return Knee{arch.peak_ops_per_cycle() / slope, label};
}

std::vector<Knee> energy_knees(const ArchSpec& arch, std::span<const double> ratios) {
    check_levels(arch, ratios.size(), "energy_knees");
    std::vector<Knee> knees;
    const double e_op = arch.array.energy_per_op;
    if (!(e_op > 0)) return knees;
    for (size_t i = 0; i < ratios.size(); ++i) {
        const double e = arch.levels[i].energy_per_byte;
        if (!(e > 0) || std::isinf(ratios[i])) continue;
        knees.push_back({e / (e_op * ratios[i]), arch.levels[i].name});
    }
    std::sort(knees.begin(), knees.end(), [](const Knee& a, const Knee& b) { return a.ai < b.ai; });
    return knees;
}

namespace {

std::vector<double> sample_abscissae(const SamplingOptions& s, const std::vector<Knee>& knees) {
    if (!(s.ai_min > 0) || !(s.ai_max > s.ai_min) || s.points_per_decade < 1) {
        throw std::invalid_argument("sampling range must satisfy 0 < ai_min < ai_max with >= 1 point per decade");
    }
    const double ppd = s.points_per_decade;
    const auto first = static_cast<long>(std::ceil(std::log10(s.ai_min) * ppd - 1e-9));
    const auto last = static_cast<long>(std::floor(std::log10(s.ai_max) * ppd + 1e-9));
    std::vector<double> xs;
    for (long k = first; k <= last; ++k) xs.push_back(std::pow(10.0, static_cast<double>(k) / ppd));
    for (const auto& k : knees) {
        if (k.ai >= s.ai_min && k.ai <= s.ai_max) xs.push_back(k.ai);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

RooflineCurve throughput_roofline(const ArchSpec& arch, std::span<const double> ratios,
                                  const SamplingOptions& sampling) {
    RooflineCurve curve;
    curve.kind = RooflineKind::throughput;
    curve.label = arch.name;
    curve.asymptote = arch.peak_ops_per_cycle();
    if (auto k = throughput_knee(arch, ratios)) curve.knees.push_back(*k);
    for (double ai : sample_abscissae(sampling, curve.knees)) {
        auto c = throughput_ceiling(arch, ratios, ai);
        curve.samples.push_back({ai, c.value, c.limiter});
    }
    return curve;
}

RooflineCurve energy_roofline(const ArchSpec& arch, std::span<const double> ratios, const SamplingOptions& sampling) {
    RooflineCurve curve;
    curve.kind = RooflineKind::energy;
    curve.label = arch.name;
    curve.asymptote = arch.array.energy_per_op > 0 ? 1.0 / arch.array.energy_per_op : kInf;
    curve.knees = energy_knees(arch, ratios);
    for (double ai : sample_abscissae(sampling, curve.knees)) {
        auto c = energy_ceiling(arch, ratios, ai);
        curve.samples.push_back({ai, c.value, c.limiter});
    }
    return curve;
}

OperatingPoint operating_point(const ArchSpec& arch, const AccessProfile& profile, const LatencyBreakdown& latency,
                               double energy_pj, int reference_level) {
    const auto ratios = ai_ratios(profile, reference_level);
    const auto ai = arithmetic_intensity(profile);

    OperatingPoint p;
    p.reference_level = reference_level;
    p.ai_ref = ai[static_cast<size_t>(reference_level - 1)];
    p.attained_ops_per_cycle = profile.op_count / latency.cycles;
    p.attained_ops_per_second = p.attained_ops_per_cycle * arch.clock_hz;
    p.attained_ops_per_pj = profile.op_count / energy_pj;

    const auto tp = throughput_ceiling(arch, ratios, p.ai_ref);
    const auto en = energy_ceiling(arch, ratios, p.ai_ref);
    p.throughput_ceiling = tp.value;
    p.energy_ceiling = en.value;
    p.throughput_bound = latency.limiter == kComputeLabel ? "compute-bound" : "memory-bound(" + latency.limiter + ")";
    p.energy_bound = en.limiter == kComputeLabel ? "compute-bound" : "memory-bound(" + en.limiter + ")";

    if (p.attained_ops_per_cycle > p.throughput_ceiling * (1 + kRooflineTolerance) ||
        p.attained_ops_per_pj > p.energy_ceiling * (1 + kRooflineTolerance)) {
        throw std::logic_error("operating point lies above its roofline");
    }
    return p;
}

}  // namespace rlab

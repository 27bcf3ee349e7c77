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
 * @file config_io.hpp
 * @brief JSON configuration files: architecture, workload, mapping and scenario.
 *
 * Parsing is strict. Unknown keys, wrong types and missing required fields are
 * ConfigError{kind = syntax}; values that parse but break a model invariant
 * (negative bandwidth, unknown dims) are ConfigError{kind = invariant} and
 * carry the validate() report. Units are fixed: bytes/cycle, pJ/byte, pJ/op, Hz.
 */

#pragma once

#include "rlab/analysis.hpp"
#include "rlab/core_model.hpp"
#include "rlab/transforms.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rlab {

class ConfigError : public std::runtime_error {
public:
    enum class Kind { syntax, invariant };

    ConfigError(Kind kind, std::string path, std::string field, std::string message, int line = 0,
                std::vector<Violation> violations = {});

    Kind kind() const { return kind_; }
    const std::string& path() const { return path_; }
    const std::string& field() const { return field_; }
    int line() const { return line_; }
    const std::vector<Violation>& violations() const { return violations_; }

private:
    Kind kind_;
    std::string path_;
    std::string field_;
    int line_;
    std::vector<Violation> violations_;
};

/// Roofline point given directly as per-level AI ratios instead of a mapping.
struct ProfileSpec {
    double ops = 0.0;
    double ai_ref = 0.0;
    std::vector<double> ai_ratios;  ///< AI_Li / AI_ref, L1 first

    bool operator==(const ProfileSpec&) const = default;
};

using TransformPass = std::variant<QuantConfig, SparsityConfig, ImcMacro>;

struct Scenario {
    std::string label;
    std::string arch;      ///< paths, relative to the scenario file
    std::string workload;
    std::string mapping;
    std::optional<ProfileSpec> profile;
    std::vector<TransformPass> transforms;
    std::optional<OverlapMode> overlap;
    int reference_level = 0;
    std::filesystem::path base_dir;  ///< not serialized

    bool operator==(const Scenario& o) const {
        return label == o.label && arch == o.arch && workload == o.workload && mapping == o.mapping &&
               profile == o.profile && transforms == o.transforms && overlap == o.overlap &&
               reference_level == o.reference_level;
    }
};

/// A scenario with files loaded and transforms applied.
struct ResolvedScenario {
    std::string label;
    ArchSpec arch;
    std::optional<WorkloadSpec> workload;
    std::optional<MappingSpec> mapping;
    std::optional<AccessProfile> profile;
    AnalysisOptions options;
};

ArchSpec parse_arch(const std::string& text, const std::string& path = "<arch>");
WorkloadSpec parse_workload(const std::string& text, const std::string& path = "<workload>");
MappingSpec parse_mapping(const std::string& text, const std::string& path = "<mapping>");
Scenario parse_scenario(const std::string& text, const std::string& path = "<scenario>");

ArchSpec load_arch(const std::filesystem::path& path);
WorkloadSpec load_workload(const std::filesystem::path& path);
MappingSpec load_mapping(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

std::string emit_arch(const ArchSpec& arch);
std::string emit_workload(const WorkloadSpec& wl);
std::string emit_mapping(const MappingSpec& map);
std::string emit_scenario(const Scenario& scenario);

/// Loads referenced files and applies the transform chain left to right.
ResolvedScenario resolve(const Scenario& scenario);

/// Builds a scenario around already-loaded paths (for --arch/--workload/--mapping).
Scenario make_scenario(const std::filesystem::path& arch, const std::filesystem::path& workload,
                       const std::filesystem::path& mapping, const std::string& label);

std::string read_file(const std::filesystem::path& path);

}  // namespace rlab

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

#include "rlab/analysis.hpp"
#include "rlab/config_io.hpp"
#include "rlab/roofline.hpp"
#include "rlab/svg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlab {

struct ScenarioReport {
    std::string label;
    ArchSpec arch;
    bool mapped = false;  ///< false for profile-only scenarios
    AnalysisResult result;
    RooflineCurve throughput;
    RooflineCurve energy;
    std::optional<Knee> knee;
};

ScenarioReport run_scenario(const ResolvedScenario& scenario, const SamplingOptions& sampling = {});

/// Full human-readable report of one scenario.
std::string text_report(const ScenarioReport& r);
/// One row per scenario.
std::string summary_csv(const std::vector<ScenarioReport>& reports);
/// One row per scenario, level and operand.
std::string traffic_csv(const std::vector<ScenarioReport>& reports);
/// Sampled roofline, one row per sample.
std::string curve_csv(const RooflineCurve& curve);
/// Side-by-side table of several scenarios.
std::string compare_text(const std::vector<ScenarioReport>& reports);

Chart throughput_chart(const std::vector<ScenarioReport>& reports);
Chart energy_chart(const std::vector<ScenarioReport>& reports);

/// Names accepted by run_sweep: A_op, f_clk, E_op, B_L<i>, E_L<i>, precision[.op],
/// density[.op], P_R, array.<axis>.
bool is_sweepable(const std::string& parameter);

/**
 * One CSV row per value, in the given order. Values that make the model
 * invalid produce a row whose status column carries the error.
 * Throws std::invalid_argument for unknown parameter names.
 */
std::string run_sweep(const Scenario& base, const std::string& parameter, const std::vector<double>& values);

}  // namespace rlab

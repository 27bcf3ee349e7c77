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

#include "rlab/roofline.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rlab {

struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

struct Chart {
    std::string title;
    std::string x_label = "arithmetic intensity (ops/byte)";
    std::string y_label;
    std::vector<RooflineCurve> curves;
    std::vector<ChartPoint> points;
    int width = 720;
    int height = 480;
};

/// Log-log chart; output depends only on the chart contents.
std::string render_svg(const Chart& chart);

/// Throws std::runtime_error if the file cannot be written.
void emit_svg(const Chart& chart, const std::filesystem::path& path);

}  // namespace rlab

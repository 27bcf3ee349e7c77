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

#include "rlab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rlab {

namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

constexpr double kLeft = 80;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string num(double v) { return fmt("%.2f", v); }
std::string data(double v) { return fmt("%.10g", v); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0;  // decade exponents
    double hi = 0;
    double px0 = 0;
    double px1 = 0;

    double map(double v) const { return px0 + (std::log10(v) - lo) / (hi - lo) * (px1 - px0); }
};

void extend(double& lo, double& hi, double v) {
    if (!(v > 0) || !std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
}

Axis decade_axis(double lo, double hi, double px0, double px1) {
    if (!(lo <= hi)) lo = hi = 1;
    Axis a;
    a.lo = std::floor(std::log10(lo));
    a.hi = std::ceil(std::log10(hi));
    if (a.hi <= a.lo) a.hi = a.lo + 1;
    a.px0 = px0;
    a.px1 = px1;
    return a;
}

// Knees are inserted into the samples; fall back to log interpolation otherwise.
double value_at(const RooflineCurve& c, double ai) {
    auto it = std::lower_bound(c.samples.begin(), c.samples.end(), ai,
                               [](const RooflineSample& s, double x) { return s.ai < x; });
    if (it == c.samples.end()) return c.samples.back().value;
    if (it->ai == ai || it == c.samples.begin()) return it->value;
    const auto& a = *(it - 1);
    const double t = (std::log(ai) - std::log(a.ai)) / (std::log(it->ai) - std::log(a.ai));
    return std::exp(std::log(a.value) + t * (std::log(it->value) - std::log(a.value)));
}

std::string tick_label(double exponent) {
    if (exponent >= 0 && exponent <= 4) return fmt("%.0f", std::pow(10.0, exponent));
    return "1e" + fmt("%.0f", exponent);
}

}  // namespace

std::string render_svg(const Chart& chart) {
    if (chart.curves.empty()) throw std::invalid_argument("render_svg: at least one curve is required");

    const double w = chart.width;
    const double h = chart.height;
    double xlo = std::numeric_limits<double>::infinity(), xhi = 0;
    double ylo = std::numeric_limits<double>::infinity(), yhi = 0;
    for (const auto& c : chart.curves) {
        for (const auto& s : c.samples) {
            extend(xlo, xhi, s.ai);
            extend(ylo, yhi, s.value);
        }
    }
    for (const auto& p : chart.points) {
        extend(xlo, xhi, p.x);
        extend(ylo, yhi, p.y);
    }
    const Axis xa = decade_axis(xlo, xhi, kLeft, w - kRight);
    const Axis ya = decade_axis(ylo, yhi, h - kBottom, kTop);

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
    s += "<text class=\"title\" x=\"" + num(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(chart.title) + "</text>\n";

    // Grid and ticks, one per decade.
    s += "<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double e = xa.lo; e <= xa.hi; e += 1) {
        const double x = xa.map(std::pow(10.0, e));
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(ya.px1) + "\" x2=\"" + num(x) + "\" y2=\"" + num(ya.px0) + "\"/>\n";
    }
    for (double e = ya.lo; e <= ya.hi; e += 1) {
        const double y = ya.map(std::pow(10.0, e));
        s += "<line x1=\"" + num(xa.px0) + "\" y1=\"" + num(y) + "\" x2=\"" + num(xa.px1) + "\" y2=\"" + num(y) + "\"/>\n";
    }
    s += "</g>\n<g class=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    s += "<rect x=\"" + num(xa.px0) + "\" y=\"" + num(ya.px1) + "\" width=\"" + num(xa.px1 - xa.px0) + "\" height=\"" +
         num(ya.px0 - ya.px1) + "\"/>\n</g>\n";
    s += "<g class=\"ticks\" fill=\"black\">\n";
    for (double e = xa.lo; e <= xa.hi; e += 1) {
        s += "<text x=\"" + num(xa.map(std::pow(10.0, e))) + "\" y=\"" + num(ya.px0 + 18) +
             "\" text-anchor=\"middle\">" + tick_label(e) + "</text>\n";
    }
    for (double e = ya.lo; e <= ya.hi; e += 1) {
        s += "<text x=\"" + num(xa.px0 - 6) + "\" y=\"" + num(ya.map(std::pow(10.0, e)) + 4) +
             "\" text-anchor=\"end\">" + tick_label(e) + "</text>\n";
    }
    s += "</g>\n";
    s += "<text class=\"x-label\" x=\"" + num((xa.px0 + xa.px1) / 2) + "\" y=\"" + num(h - 16) +
         "\" text-anchor=\"middle\">" + escape(chart.x_label) + "</text>\n";
    s += "<text class=\"y-label\" x=\"18\" y=\"" + num((ya.px0 + ya.px1) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num((ya.px0 + ya.px1) / 2) + ")\">" +
         escape(chart.y_label) + "</text>\n";

    for (size_t i = 0; i < chart.curves.size(); ++i) {
        const auto& c = chart.curves[i];
        const char* color = kPalette[i % kPalette.size()];
        s += "<g class=\"curve\" data-label=\"" + escape(c.label) + "\">\n<polyline fill=\"none\" stroke=\"" +
             std::string(color) + "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& p : c.samples) {
            if (!(p.value > 0) || !std::isfinite(p.value)) continue;
            s += (first ? "" : " ") + num(xa.map(p.ai)) + "," + num(ya.map(p.value));
            first = false;
        }
        s += "\"/>\n";
        for (const auto& k : c.knees) {
            if (k.ai < std::pow(10.0, xa.lo) || k.ai > std::pow(10.0, xa.hi)) continue;
            const double y = value_at(c, k.ai);
            s += "<circle class=\"knee\" data-ai=\"" + data(k.ai) + "\" data-label=\"" + escape(k.label) + "\" cx=\"" +
                 num(xa.map(k.ai)) + "\" cy=\"" + num(ya.map(y)) + "\" r=\"4\" fill=\"white\" stroke=\"" + color +
                 "\" stroke-width=\"2\"/>\n";
        }
        s += "<text class=\"legend\" x=\"" + num(xa.px1 + 10) + "\" y=\"" + num(ya.px1 + 14 + 16 * static_cast<double>(i)) +
             "\" fill=\"" + color + "\">" + escape(c.label) + "</text>\n</g>\n";
    }

    const size_t base = chart.curves.size();
    for (size_t i = 0; i < chart.points.size(); ++i) {
        const auto& p = chart.points[i];
        const char* color = kPalette[(base + i) % kPalette.size()];
        const double x = xa.map(p.x);
        const double y = ya.map(p.y);
        s += "<g class=\"point\" data-label=\"" + escape(p.label) + "\" data-x=\"" + data(p.x) + "\" data-y=\"" +
             data(p.y) + "\">\n<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"5\" fill=\"" + color +
             "\"/>\n<text x=\"" + num(x + 8) + "\" y=\"" + num(y - 8) + "\" fill=\"" + color + "\">" +
             escape(p.label) + "</text>\n</g>\n";
    }
    s += "</svg>\n";
    return s;
}

void emit_svg(const Chart& chart, const std::filesystem::path& path) {
    const auto text = render_svg(chart);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace rlab

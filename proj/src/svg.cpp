/*
 * Copyright (C) 2026 lgkit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lgk/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace lgk {

namespace {

constexpr double kPixelsPerMeter = 10.0;
constexpr double kPaddingMeters = 3.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

}  // namespace

std::string render_svg(std::span<const LaneGraph> graphs) {
  double x_lo = 0.0, x_hi = 1.0, z_lo = 0.0, z_hi = 1.0;
  bool first = true;
  for (const LaneGraph& graph : graphs) {
    for (const BezierCenterline& line : graph.centerlines) {
      for (const PlanarPoint& p : line.control_points) {
        // The control hull contains the curve, so bounds over control
        // points cover every drawn path.
        if (first) {
          x_lo = x_hi = p.x();
          z_lo = z_hi = p.y();
          first = false;
        }
        x_lo = std::min(x_lo, p.x());
        x_hi = std::max(x_hi, p.x());
        z_lo = std::min(z_lo, p.y());
        z_hi = std::max(z_hi, p.y());
      }
    }
  }
  x_lo -= kPaddingMeters;
  z_lo -= kPaddingMeters;
  x_hi += kPaddingMeters;
  z_hi += kPaddingMeters;
  const double width = (x_hi - x_lo) * kPixelsPerMeter;
  const double height = (z_hi - z_lo) * kPixelsPerMeter;
  // BEV convention: z forward points up on the canvas.
  const auto sx = [&](double x) { return (x - x_lo) * kPixelsPerMeter; };
  const auto sy = [&](double z) { return (z_hi - z) * kPixelsPerMeter; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) +
         " " + fmt(height) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (size_t g = 0; g < graphs.size(); ++g) {
    const LaneGraph& graph = graphs[g];
    const char* color = kPalette[g % std::size(kPalette)];
    for (const BezierCenterline& line : graph.centerlines) {
      const PlanarPoint& p0 = line.control_points[0];
      const PlanarPoint& p1 = line.control_points[1];
      const PlanarPoint& p2 = line.control_points[2];
      svg += "  <path d=\"M " + fmt(sx(p0.x())) + " " + fmt(sy(p0.y())) +
             " Q " + fmt(sx(p1.x())) + " " + fmt(sy(p1.y())) + " " +
             fmt(sx(p2.x())) + " " + fmt(sy(p2.y())) +
             "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";

      // Arrowhead along the end tangent.
      PlanarPoint tangent = p2 - p1;
      if (tangent.norm() < 1e-12) {
        tangent = p2 - p0;
      }
      if (tangent.norm() >= 1e-12) {
        tangent.normalize();
        const PlanarPoint normal(-tangent.y(), tangent.x());
        const PlanarPoint tip = p2;
        const PlanarPoint left = p2 - 1.2 * tangent + 0.6 * normal;
        const PlanarPoint right = p2 - 1.2 * tangent - 0.6 * normal;
        svg += "  <polygon points=\"" + fmt(sx(tip.x())) + "," +
               fmt(sy(tip.y())) + " " + fmt(sx(left.x())) + "," +
               fmt(sy(left.y())) + " " + fmt(sx(right.x())) + "," +
               fmt(sy(right.y())) + "\" fill=\"" + color + "\"/>\n";
      }
    }
    for (const auto& [from, to] : graph.incidence.edges()) {
      const PlanarPoint junction = graph.centerlines[from].control_points[2];
      svg += "  <circle cx=\"" + fmt(sx(junction.x())) + "\" cy=\"" +
             fmt(sy(junction.y())) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace lgk

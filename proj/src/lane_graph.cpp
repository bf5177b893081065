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

#include "lgk/lane_graph.hpp"

#include <cmath>

namespace lgk {

std::vector<std::pair<int, int>> IncidenceMatrix::edges() const {
  std::vector<std::pair<int, int>> result;
  for (int from = 0; from < size_; ++from) {
    for (int to = 0; to < size_; ++to) {
      if (at(from, to)) {
        result.emplace_back(from, to);
      }
    }
  }
  return result;
}

int IncidenceMatrix::edge_count() const {
  int count = 0;
  for (const auto value : data_) {
    count += value;
  }
  return count;
}

PlanarPoint bezier_eval(const BezierCenterline& c, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("bezier_eval: t outside [0, 1]");
  }
  const double s = 1.0 - t;
  return s * s * c.control_points[0] + 2.0 * t * s * c.control_points[1] +
         t * t * c.control_points[2];
}

Polyline interpolate(const BezierCenterline& c, int point_count) {
  if (point_count < 2) {
    throw std::invalid_argument("interpolate: need at least 2 points");
  }
  Polyline line;
  line.points.reserve(point_count);
  for (int k = 0; k < point_count; ++k) {
    line.points.push_back(
        bezier_eval(c, static_cast<double>(k) / (point_count - 1)));
  }
  return line;
}

PlanarPoint direction_vector(const BezierCenterline& c) {
  const PlanarPoint delta = c.control_points[2] - c.control_points[0];
  const double norm = delta.norm();
  if (norm == 0.0) {
    throw DegenerateCenterline(
        "direction_vector: start and end control points coincide");
  }
  return delta / norm;
}

IncidenceMatrix build_incidence(std::span<const BezierCenterline> centerlines,
                                double connect_tol) {
  const int n = static_cast<int>(centerlines.size());
  IncidenceMatrix incidence(n);
  for (int from = 0; from < n; ++from) {
    const PlanarPoint end = centerlines[from].control_points[2];
    for (int to = 0; to < n; ++to) {
      if (from == to) {
        continue;
      }
      const PlanarPoint start = centerlines[to].control_points[0];
      incidence.set(from, to, (end - start).norm() <= connect_tol);
    }
  }
  return incidence;
}

std::vector<std::string> validate(const LaneGraph& g, double connect_tol) {
  std::vector<std::string> violations;
  const int n = static_cast<int>(g.centerlines.size());
  if (g.incidence.size() != n) {
    violations.push_back("incidence side " +
                         std::to_string(g.incidence.size()) +
                         " does not match centerline count " +
                         std::to_string(n));
    return violations;
  }
  for (int i = 0; i < n; ++i) {
    for (const PlanarPoint& p : g.centerlines[i].control_points) {
      if (!p.allFinite()) {
        violations.push_back("centerline " + std::to_string(i) +
                             " has non-finite control point");
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (g.incidence.at(i, i)) {
      violations.push_back("self-loop at centerline " + std::to_string(i));
    }
  }
  for (int from = 0; from < n; ++from) {
    for (int to = 0; to < n; ++to) {
      if (from == to || !g.incidence.at(from, to)) {
        continue;
      }
      const double gap = (g.centerlines[from].control_points[2] -
                          g.centerlines[to].control_points[0])
                             .norm();
      if (gap > connect_tol) {
        violations.push_back("edge " + std::to_string(from) + "->" +
                             std::to_string(to) + " spans gap " +
                             std::to_string(gap) + " m > tol");
      }
    }
  }
  return violations;
}

BezierCenterline subcurve(const BezierCenterline& c, double t0, double t1) {
  // Polar form F(u, v) of the quadratic: F(t, t) = B(t); the restriction to
  // [t0, t1] has control points F(t0,t0), F(t0,t1), F(t1,t1).
  const auto polar = [&c](double u, double v) -> PlanarPoint {
    return (1.0 - u) * (1.0 - v) * c.control_points[0] +
           (u * (1.0 - v) + v * (1.0 - u)) * c.control_points[1] +
           u * v * c.control_points[2];
  };
  return BezierCenterline{{polar(t0, t0), polar(t0, t1), polar(t1, t1)}};
}

}  // namespace lgk

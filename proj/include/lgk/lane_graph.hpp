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

#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgk {

/// Planar ground coordinates in meters: [0] = x (lateral, right),
/// [1] = z (forward). See docs/formats.md for the full axis convention.
using PlanarPoint = Eigen::Vector2d;

/// Number of interpolation points used for centerline polylines.
inline constexpr int kInterpolationPoints = 100;

/// Endpoint tolerance, in meters, for treating the end of one centerline
/// and the start of another as coincident.
inline constexpr double kDefaultConnectTol = 0.5;

/// Quadratic Bezier centerline: start, middle, end control point.
struct BezierCenterline {
  std::array<PlanarPoint, 3> control_points;
};

struct DegenerateCenterline : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Densely sampled centerline.
struct Polyline {
  std::vector<PlanarPoint> points;
};

/// Dense boolean incidence matrix; at(x, y) means "end of centerline x
/// meets start of centerline y".
class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;
  explicit IncidenceMatrix(int size) : size_(size) {
    data_.assign(static_cast<size_t>(size) * size, 0);
  }

  int size() const { return size_; }
  bool at(int from, int to) const {
    return data_[static_cast<size_t>(from) * size_ + to] != 0;
  }
  void set(int from, int to, bool value) {
    data_[static_cast<size_t>(from) * size_ + to] = value ? 1 : 0;
  }

  std::vector<std::pair<int, int>> edges() const;
  int edge_count() const;

  bool operator==(const IncidenceMatrix&) const = default;

 private:
  int size_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Directed lane graph: vertices are centerlines, edges end-to-start
/// connectivity.
struct LaneGraph {
  std::vector<BezierCenterline> centerlines;
  IncidenceMatrix incidence;
};

/// Point on the curve at parameter t in [0, 1]. Rejects t outside [0, 1].
PlanarPoint bezier_eval(const BezierCenterline& c, double t);

/// Samples the curve at t = k/(point_count-1), k = 0..point_count-1.
Polyline interpolate(const BezierCenterline& c,
                     int point_count = kInterpolationPoints);

/// Unit vector from the first to the last control point. Throws
/// DegenerateCenterline when the endpoints coincide.
PlanarPoint direction_vector(const BezierCenterline& c);

/// A[x, y] = true iff ||end(x) - start(y)|| <= connect_tol and x != y.
IncidenceMatrix build_incidence(std::span<const BezierCenterline> centerlines,
                                double connect_tol = kDefaultConnectTol);

/// Empty result iff the graph satisfies every type invariant; otherwise one
/// human-readable line per violation.
std::vector<std::string> validate(const LaneGraph& g,
                                  double connect_tol = kDefaultConnectTol);

/// Exact restriction of the curve to the parameter interval [t0, t1],
/// expressed as a quadratic Bezier via the polar form.
BezierCenterline subcurve(const BezierCenterline& c, double t0, double t1);

}  // namespace lgk

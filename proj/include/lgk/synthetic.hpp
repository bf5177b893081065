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

#include <cstdint>
#include <functional>
#include <span>

#include "lgk/bev_warp.hpp"
#include "lgk/camera.hpp"
#include "lgk/lane_graph.hpp"
#include "lgk/postmerge.hpp"

namespace lgk {

enum class Layout { Straight, Merge, Intersection };

struct TimedPose {
  double timestamp = 0.0;     // seconds
  RigidTransform pose;        // ego -> global
};

/// Camera shared by all frames of a scene; combined with an ego pose it
/// yields the frame's CameraRig.
struct RigTemplate {
  CameraIntrinsics intrinsics;
  RigidTransform cam_from_ego;
  double camera_height = 0.0;

  CameraRig with_pose(const RigidTransform& ego_pose) const {
    return {intrinsics, cam_from_ego, ego_pose, camera_height};
  }
};

/// Ground-truth world: lane graph in the global frame plus the ego
/// trajectory driving through it.
struct SyntheticScene {
  LaneGraph gt_graph;
  std::vector<TimedPose> ego_trajectory;
  RigTemplate rig_template;
};

struct NoiseParams {
  double control_point_sigma = 0.0;   // meters
  double fragment_probability = 0.0;  // [0, 1]
  double dropout_probability = 0.0;   // [0, 1]
  double false_positive_rate = 0.0;   // expected count per frame
  double prob_noise_sigma = 0.0;      // logit scale

  void ensure_valid() const;
};

/// Axis-aligned ground window in some ego frame.
struct Window {
  double x_min = -25.0;
  double x_max = 25.0;
  double z_min = 1.0;
  double z_max = 50.0;

  bool contains(const PlanarPoint& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= z_min &&
           p.y() <= z_max;
  }

  static Window target_of(const BevGrid& grid) {
    return {grid.x_min, grid.x_max, grid.z_min, grid.z_max};
  }
};

/// Trajectory cadence of generated scenes.
inline constexpr double kTrajectoryStepSeconds = 0.5;
inline constexpr double kTrajectoryDurationSeconds = 24.0;

/// Deterministic scene for `seed`: a lane graph of the requested layout
/// (Merge and Intersection layouts contain connectivity edges) and an ego
/// trajectory along the main lane at a seeded urban speed.
SyntheticScene generate_scene(std::uint64_t seed, Layout layout, int lanes);

/// Per-frame detector-style estimates of the scene's ground truth, each in
/// its own ego frame: lines clipped to the default target window, then
/// optionally fragmented, jittered, dropped, and padded with false
/// positives. relative_time is measured against the middle requested frame.
std::vector<FrameEstimate> simulate_frame_estimates(
    const SyntheticScene& scene, std::span<const int> frame_indices,
    const NoiseParams& noise, std::uint64_t seed);

/// Scalar field on the ground plane, pattern(x, z).
using GroundPattern = std::function<double(double, double)>;

/// Renders what `rig` sees of the pattern: each pixel holds the pattern
/// value at its flat-ground intersection, zero at or above the horizon.
FeatureMap render_ground_pattern(const GroundPattern& pattern,
                                 const CameraRig& rig, ImageDims dims,
                                 Exec exec = Exec::Parallel);

/// Rigidly transforms every centerline (edges preserved).
LaneGraph transform_graph(const LaneGraph& graph,
                          const RigidTransform& target_from_source);

/// Restricts every centerline to the maximal parameter intervals where
/// `inside` holds, dropping pieces shorter than min_length; edges are
/// rebuilt geometrically.
LaneGraph clip_graph(const LaneGraph& graph,
                     const std::function<bool(const PlanarPoint&)>& inside,
                     double min_length = 2.0,
                     double connect_tol = kDefaultConnectTol);

LaneGraph clip_graph_to_window(const LaneGraph& graph, const Window& window,
                               double min_length = 2.0,
                               double connect_tol = kDefaultConnectTol);

/// Re-expresses an estimate in another ego frame (control points rigidly
/// moved, polylines re-interpolated).
FrameEstimate estimate_in_frame(const FrameEstimate& estimate,
                                const RigidTransform& target_from_source);

}  // namespace lgk

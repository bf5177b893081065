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

#include "lgk/lane_graph.hpp"

namespace lgk {

// Axis convention (fixed project-wide, see docs/formats.md):
//   ego frame:    x lateral-right, y down, z forward; the ground is the
//                 horizontal plane camera_height below the camera center.
//   camera frame: x right (u), y down (v), z forward along the optical axis.
//   image:        u grows rightward with columns, v downward with rows.

/// Pinhole intrinsics in feature-map pixels.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

/// Proper rigid motion p -> R * p + t.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  RigidTransform inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }

  /// Composition: (a * b)(p) = a(b(p)).
  RigidTransform operator*(const RigidTransform& other) const {
    return {rotation * other.rotation,
            rotation * other.translation + translation};
  }

  /// max(||R^T R - I||_inf, |det R - 1|); zero for a proper rotation.
  double orthonormality_error() const;

  static RigidTransform identity() { return {}; }

  /// Rotation about the vertical (y-down) axis. Positive angle turns
  /// z-forward toward x-right, i.e. a right turn seen from above.
  static RigidTransform yaw(double radians,
                            const Eigen::Vector3d& translation =
                                Eigen::Vector3d::Zero());
};

/// One frame's camera: intrinsics M, extrinsics C (ego -> camera), ego pose
/// P (ego -> global), and the flat-ground height of the camera.
struct CameraRig {
  CameraIntrinsics intrinsics;
  RigidTransform cam_from_ego;
  RigidTransform ego_pose;
  double camera_height = 0.0;
};

/// Camera center expressed in the rig's ego frame.
Eigen::Vector3d camera_center_in_ego(const CameraRig& rig);

/// y coordinate (ego frame, y down) of the rig's flat ground plane:
/// camera_height below the camera center.
double ground_plane_y(const CameraRig& rig);

struct GroundHit {
  PlanarPoint point = PlanarPoint::Zero();  // (x, z) in the rig's ego frame
  bool valid = false;
};

struct PixelHit {
  double u = 0.0;
  double v = 0.0;
  bool valid = false;
};

/// Rays less steep than this below horizontal are treated as hitting the
/// horizon: their ground intersections would be unboundedly far away.
inline constexpr double kHorizonMarginRadians = 0.5 * M_PI / 180.0;

/// Intersects the back-projected ray of feature-map pixel (u, v) with the
/// rig's ground plane. Invalid for rays at or above the horizon margin.
GroundHit pixel_to_ground(const CameraRig& rig, double u, double v);

/// Projects the ground point (x, z) of the rig's ego frame into the image.
/// Invalid when the point lies behind the image plane. Exact inverse of
/// pixel_to_ground on its valid domain.
PixelHit ground_to_pixel(const CameraRig& rig, const PlanarPoint& ground_xz);

/// Maps a ground point from `frame`'s ego coordinates into `ref`'s ego
/// coordinates through the global frame (P_ref^-1 * P_frame on the lifted
/// 3D point), then drops the vertical component.
PlanarPoint ref_from_frame(const CameraRig& ref, const CameraRig& frame,
                           const PlanarPoint& point_in_frame);

/// Planar action of an ego-to-ego transform on ground coordinates (x, z).
PlanarPoint apply_planar(const RigidTransform& ego_to_ego,
                         const PlanarPoint& point);

}  // namespace lgk

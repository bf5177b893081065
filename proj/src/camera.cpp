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

#include "lgk/camera.hpp"

#include <Eigen/LU>
#include <cmath>

namespace lgk {

double RigidTransform::orthonormality_error() const {
  const Eigen::Matrix3d gram =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  const double ortho = gram.cwiseAbs().maxCoeff();
  const double det = std::abs(rotation.determinant() - 1.0);
  return std::max(ortho, det);
}

RigidTransform RigidTransform::yaw(double radians,
                                   const Eigen::Vector3d& translation) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  RigidTransform t;
  t.rotation << c, 0.0, s,
                0.0, 1.0, 0.0,
               -s, 0.0, c;
  t.translation = translation;
  return t;
}

Eigen::Vector3d camera_center_in_ego(const CameraRig& rig) {
  return -(rig.cam_from_ego.rotation.transpose() *
           rig.cam_from_ego.translation);
}

double ground_plane_y(const CameraRig& rig) {
  return camera_center_in_ego(rig).y() + rig.camera_height;
}

GroundHit pixel_to_ground(const CameraRig& rig, double u, double v) {
  GroundHit hit;
  const Eigen::Vector3d ray_cam((u - rig.intrinsics.cx) / rig.intrinsics.fx,
                                (v - rig.intrinsics.cy) / rig.intrinsics.fy,
                                1.0);
  const Eigen::Vector3d ray_ego =
      rig.cam_from_ego.rotation.transpose() * ray_cam;
  // Downward component relative to the ray length; below-horizon rays have
  // sin(elevation) past the margin. Keeps ground depths finite.
  const double sin_down = ray_ego.y() / ray_ego.norm();
  if (!(sin_down > std::sin(kHorizonMarginRadians))) {
    return hit;
  }
  const Eigen::Vector3d center = camera_center_in_ego(rig);
  const double scale = (ground_plane_y(rig) - center.y()) / ray_ego.y();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return hit;
  }
  const Eigen::Vector3d ground = center + scale * ray_ego;
  hit.point = PlanarPoint(ground.x(), ground.z());
  hit.valid = true;
  return hit;
}

PixelHit ground_to_pixel(const CameraRig& rig, const PlanarPoint& ground_xz) {
  PixelHit hit;
  const Eigen::Vector3d p_ego(ground_xz.x(), ground_plane_y(rig),
                              ground_xz.y());
  const Eigen::Vector3d p_cam = rig.cam_from_ego.apply(p_ego);
  if (!(p_cam.z() > 0.0)) {
    return hit;
  }
  hit.u = rig.intrinsics.fx * p_cam.x() / p_cam.z() + rig.intrinsics.cx;
  hit.v = rig.intrinsics.fy * p_cam.y() / p_cam.z() + rig.intrinsics.cy;
  hit.valid = true;
  return hit;
}

PlanarPoint ref_from_frame(const CameraRig& ref, const CameraRig& frame,
                           const PlanarPoint& point_in_frame) {
  const RigidTransform ref_from_frame_t = ref.ego_pose.inverse() *
                                          frame.ego_pose;
  return apply_planar(ref_from_frame_t, point_in_frame);
}

PlanarPoint apply_planar(const RigidTransform& ego_to_ego,
                         const PlanarPoint& point) {
  const Eigen::Vector3d mapped =
      ego_to_ego.apply(Eigen::Vector3d(point.x(), 0.0, point.y()));
  return {mapped.x(), mapped.z()};
}

}  // namespace lgk

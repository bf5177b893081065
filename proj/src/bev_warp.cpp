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

#include "lgk/bev_warp.hpp"

#include <cmath>
#include <stdexcept>

namespace lgk {

namespace {

int whole_cells(double extent, double resolution, const char* what) {
  const double cells = extent / resolution;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 || rounded < 1.0) {
    throw std::invalid_argument(std::string("BevGrid: ") + what +
                                " is not a whole positive number of cells");
  }
  return static_cast<int>(rounded);
}

/// Frame-from-reference ego motion with floating-point fuzz snapped away,
/// so that warping with frame_rig == ref_rig reduces exactly to the
/// reference-frame resampling path.
RigidTransform frame_from_ref(const CameraRig& frame_rig,
                              const CameraRig& ref_rig) {
  RigidTransform t = frame_rig.ego_pose.inverse() * ref_rig.ego_pose;
  const double rot_fuzz =
      (t.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double trans_fuzz = t.translation.cwiseAbs().maxCoeff();
  if (rot_fuzz < 1e-12 && trans_fuzz < 1e-12) {
    return RigidTransform::identity();
  }
  return t;
}

struct CellProjection {
  double u = 0.0;
  double v = 0.0;
  bool valid = false;
};

CellProjection project_cell(const RigidTransform& frame_from_ref_t,
                            const CameraRig& frame_rig, const BevGrid& grid,
                            int row, int col) {
  CellProjection proj;
  const PlanarPoint in_frame =
      apply_planar(frame_from_ref_t, grid.fov_cell_center(row, col));
  const PixelHit pixel = ground_to_pixel(frame_rig, in_frame);
  if (!pixel.valid) {
    return proj;
  }
  proj.u = pixel.u;
  proj.v = pixel.v;
  proj.valid = true;
  return proj;
}

}  // namespace

int BevGrid::target_rows() const {
  return whole_cells(z_max - z_min, resolution, "z extent");
}

int BevGrid::target_cols() const {
  return whole_cells(x_max - x_min, resolution, "x extent");
}

int BevGrid::margin_cells() const {
  if (fov_margin == 0.0) {
    return 0;
  }
  return whole_cells(fov_margin, resolution, "fov margin");
}

int BevGrid::fov_rows() const { return target_rows() + 2 * margin_cells(); }

int BevGrid::fov_cols() const { return target_cols() + 2 * margin_cells(); }

PlanarPoint BevGrid::fov_cell_center(int row, int col) const {
  const double x = x_min - fov_margin + (col + 0.5) * resolution;
  const double z = z_min - fov_margin + (row + 0.5) * resolution;
  return {x, z};
}

void BevGrid::ensure_valid() const {
  if (!(x_min < x_max) || !(z_min < z_max)) {
    throw std::invalid_argument("BevGrid: bounds must be ordered");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("BevGrid: resolution must be positive");
  }
  if (fov_margin < 0.0) {
    throw std::invalid_argument("BevGrid: fov margin must be non-negative");
  }
  (void)target_rows();
  (void)target_cols();
  (void)margin_cells();
}

WarpedFrame warp_frame(const FeatureMap& image, const CameraRig& frame_rig,
                       const CameraRig& ref_rig, const BevGrid& grid,
                       double relative_time, Exec exec) {
  grid.ensure_valid();
  if (image.empty()) {
    throw std::invalid_argument("warp_frame: empty image");
  }
  const int rows = grid.fov_rows();
  const int cols = grid.fov_cols();
  const RigidTransform motion = frame_from_ref(frame_rig, ref_rig);

  WarpedFrame out;
  out.features = FeatureMap(rows, cols, image.channels());
  out.mask = BinaryMask(rows, cols);
  out.relative_time = relative_time;

  for_each_index(rows, exec, [&](int row) {
    for (int col = 0; col < cols; ++col) {
      const CellProjection proj =
          project_cell(motion, frame_rig, grid, row, col);
      if (!proj.valid) {
        continue;
      }
      const bool in_bounds = bilinear_sample_into(
          image, proj.u, proj.v, out.features.cell(row, col));
      if (in_bounds) {
        out.mask.set(row, col, 1);
      }
    }
  });
  return out;
}

BinaryMask compute_mask(ImageDims image_dims, const CameraRig& frame_rig,
                        const CameraRig& ref_rig, const BevGrid& grid,
                        Exec exec) {
  grid.ensure_valid();
  const int rows = grid.fov_rows();
  const int cols = grid.fov_cols();
  const RigidTransform motion = frame_from_ref(frame_rig, ref_rig);

  BinaryMask mask(rows, cols);
  for_each_index(rows, exec, [&](int row) {
    for (int col = 0; col < cols; ++col) {
      const CellProjection proj =
          project_cell(motion, frame_rig, grid, row, col);
      if (proj.valid &&
          sample_in_bounds(image_dims.height, image_dims.width, proj.u,
                           proj.v)) {
        mask.set(row, col, 1);
      }
    }
  });
  return mask;
}

FeatureMap crop_to_target(const FeatureMap& fov_map, const BevGrid& grid) {
  const int margin = grid.margin_cells();
  const int rows = grid.target_rows();
  const int cols = grid.target_cols();
  if (fov_map.height() < rows + 2 * margin ||
      fov_map.width() < cols + 2 * margin) {
    throw std::invalid_argument("crop_to_target: FOV smaller than target");
  }
  FeatureMap out(rows, cols, fov_map.channels());
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const auto src = fov_map.cell(row + margin, col + margin);
      auto dst = out.cell(row, col);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return out;
}

BinaryMask crop_to_target(const BinaryMask& fov_mask, const BevGrid& grid) {
  const int margin = grid.margin_cells();
  const int rows = grid.target_rows();
  const int cols = grid.target_cols();
  if (fov_mask.height() < rows + 2 * margin ||
      fov_mask.width() < cols + 2 * margin) {
    throw std::invalid_argument("crop_to_target: FOV smaller than target");
  }
  BinaryMask out(rows, cols);
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      out.set(row, col, fov_mask.at(row + margin, col + margin));
    }
  }
  return out;
}

}  // namespace lgk

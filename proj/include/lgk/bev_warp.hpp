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

#include "lgk/camera.hpp"
#include "lgk/parallel.hpp"
#include "lgk/tensor.hpp"

namespace lgk {

/// BEV output windows, in the reference frame's ego coordinates.
///
/// The target window is the H' x W' area the lane graph is estimated for;
/// the FOV grid extends it by fov_margin meters on every side so that
/// frames taken before or after the reference still land inside. Grid rows
/// run along z (row 0 nearest, i.e. smallest z), columns along x (col 0 at
/// x_min - fov_margin, leftmost).
struct BevGrid {
  double x_min = -25.0;
  double x_max = 25.0;
  double z_min = 1.0;
  double z_max = 50.0;
  double resolution = 0.25;
  double fov_margin = 12.0;

  int target_rows() const;
  int target_cols() const;
  int fov_rows() const;
  int fov_cols() const;
  int margin_cells() const;

  /// Center of FOV cell (row, col) in reference ego coordinates (x, z).
  PlanarPoint fov_cell_center(int row, int col) const;

  /// Throws std::invalid_argument unless bounds are ordered, resolution is
  /// positive, and all window extents are whole numbers of cells.
  void ensure_valid() const;
};

/// One frame's features resampled onto the FOV grid, with the validity mask.
struct WarpedFrame {
  FeatureMap features;   // FOV grid, masked-out cells all zero
  BinaryMask mask;       // 1 where the frame actually observed the cell
  double relative_time = 0.0;
};

struct ImageDims {
  int height = 0;
  int width = 0;
};

/// Backward-maps every FOV cell center into `image` (taken by `frame_rig`)
/// and bilinearly samples it: the resampling form of the flat-ground
/// homography warp, composed with the frame-to-reference ego motion for
/// non-reference frames. A cell is valid iff its ground point projects in
/// front of the camera and the sample lands inside the image.
WarpedFrame warp_frame(const FeatureMap& image, const CameraRig& frame_rig,
                       const CameraRig& ref_rig, const BevGrid& grid,
                       double relative_time = 0.0,
                       Exec exec = Exec::Parallel);

/// The mask warp_frame would produce, without touching any features.
BinaryMask compute_mask(ImageDims image_dims, const CameraRig& frame_rig,
                        const CameraRig& ref_rig, const BevGrid& grid,
                        Exec exec = Exec::Parallel);

/// Extracts the central target window from a FOV-grid map.
FeatureMap crop_to_target(const FeatureMap& fov_map, const BevGrid& grid);
BinaryMask crop_to_target(const BinaryMask& fov_mask, const BevGrid& grid);

}  // namespace lgk

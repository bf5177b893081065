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
#include <optional>
#include <span>

#include "lgk/bev_warp.hpp"

namespace lgk {

enum class AggOp { Max, Mean };

/// Per-cell reduction of warped frames into one BEV feature map.
struct AggregatedBev {
  FeatureMap features;   // FOV grid
  BinaryMask coverage;   // union of the input masks
  int frame_count = 0;
};

/// Reduces, per cell and channel, over the frames whose mask bit is set;
/// the mask acts as a validity gate, so invalid frames are excluded from
/// the reduction rather than contributing zeros. Cells no frame covers stay
/// zero. `pre_transform` (empty = identity) is applied to each frame's cell
/// vector before reduction. Mean divides by the per-cell valid-frame count
/// and sums pairwise so the result is stable against frame reordering.
AggregatedBev aggregate(std::span<const WarpedFrame> frames, AggOp op,
                        const CellTransform& pre_transform = {},
                        Exec exec = Exec::Parallel);

/// Deterministic stand-in for a learned residual block: x + relu(W x + b)
/// with W, b drawn once from `seed`. No seed means the identity transform.
CellTransform default_pre_transform(std::optional<std::uint64_t> seed,
                                    int channels);

}  // namespace lgk

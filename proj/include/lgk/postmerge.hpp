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

#include <span>
#include <vector>

#include "lgk/lane_graph.hpp"

namespace lgk {

/// One frame's lane-graph estimate: Q centerline candidates with existence
/// probabilities, pairwise connectivity scores, and interpolated polylines.
struct FrameEstimate {
  std::vector<BezierCenterline> control_points;  // Q x 3 x 2
  std::vector<double> probabilities;             // Q, in [0, 1]
  std::vector<double> connectivity;              // Q x Q row-major, in [0, 1]
  std::vector<Polyline> polylines;               // Q x omega x 2
  double relative_time = 0.0;

  int count() const { return static_cast<int>(control_points.size()); }
  double conn(int from, int to) const {
    return connectivity[static_cast<size_t>(from) * count() + to];
  }

  /// Throws std::invalid_argument when field sizes disagree.
  void ensure_consistent() const;

  /// Builds an estimate whose polylines are freshly interpolated from the
  /// control points.
  static FrameEstimate from_control_points(
      std::vector<BezierCenterline> control_points,
      std::vector<double> probabilities, std::vector<double> connectivity,
      double relative_time = 0.0, int omega = kInterpolationPoints);
};

/// Matching thresholds of the temporal merge. Defaults are artifact
/// choices, exposed as CLI flags.
struct MergeParams {
  double prob_thresh = 0.5;  // existence probability cutoff, in [0, 1]
  double dir_thresh = 0.5;   // direction dot-product cutoff, in [-1, 1]
  double dist_thresh = 2.0;  // point-match radius, meters, > 0

  void ensure_valid() const;
};

/// Connectivity scores at or above this are kept as edges of the merged
/// graph.
inline constexpr double kConnectivityThresh = 0.5;

/// Keeps the rows with probability >= prob_thresh (and the matching
/// connectivity rows and columns), preserving order.
FrameEstimate filter_by_probability(const FrameEstimate& estimate,
                                    double prob_thresh);

/// Core of the temporal merge. For every reference centerline, scans the
/// non-reference candidates (frame order, then index order); a candidate
/// matches when its direction dot-product exceeds dir_thresh and more than
/// half of the reference polyline points have some candidate point within
/// dist_thresh. A match splices the candidate's control points onto
/// whichever end of the reference line is farther from the candidate, and
/// the reference polyline is re-interpolated before the next candidate.
///
/// All estimates must already be expressed in the reference ego frame and
/// pre-filtered by probability.
FrameEstimate match_and_update(const FrameEstimate& reference,
                               std::span<const FrameEstimate> others,
                               const MergeParams& params);

/// Full temporal post-processing: filter every estimate, merge the others
/// into the reference, then build the output graph from the updated
/// reference. Edges are the reference connectivity scores thresholded at
/// kConnectivityThresh, joined with the geometric incidence of the updated
/// centerlines. An empty reference after filtering yields an empty graph.
LaneGraph post_merge(std::span<const FrameEstimate> estimates,
                     int reference_index, const MergeParams& params,
                     double connect_tol = kDefaultConnectTol);

}  // namespace lgk

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

#include <utility>
#include <vector>

#include "lgk/lane_graph.hpp"

namespace lgk {

/// Default point-match radius: two cells at the default BEV resolution.
inline constexpr double kDefaultMatchDist = 0.5;

struct EvalReport {
  double mean_f = 0.0;
  double detect_f = 0.0;
  double connect_f = 0.0;
  std::vector<std::pair<int, int>> matched_pairs;  // (pred index, gt index)
};

/// Point-level F-score over the interpolated centerlines: precision is the
/// fraction of predicted points within match_dist of some ground-truth
/// point, recall the symmetric fraction. Empty vs non-empty scores 0,
/// empty vs empty scores 1.
double centerline_f(const LaneGraph& pred, const LaneGraph& gt,
                    double match_dist = kDefaultMatchDist);

struct DetectionResult {
  double score = 0.0;
  std::vector<std::pair<int, int>> matched_pairs;
};

/// Greedy one-to-one centerline matching by ascending symmetric mean
/// (Chamfer) polyline distance; a pair counts as a detection when that
/// distance is below match_dist. F-score over TP/FP/FN.
DetectionResult detection_f(const LaneGraph& pred, const LaneGraph& gt,
                            double match_dist = kDefaultMatchDist);

/// F-score over directed incidence entries restricted to the matched
/// vertices. With no matched pairs: 1 if both graphs are edgeless, else 0.
double connectivity_f(const LaneGraph& pred, const LaneGraph& gt,
                      const std::vector<std::pair<int, int>>& matched_pairs);

/// All three metrics in one pass.
EvalReport evaluate(const LaneGraph& pred, const LaneGraph& gt,
                    double match_dist = kDefaultMatchDist);

}  // namespace lgk

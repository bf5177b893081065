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

#include "lgk/metrics.hpp"

#include <algorithm>
#include <limits>

namespace lgk {

namespace {

std::vector<Polyline> interpolate_all(const LaneGraph& graph) {
  std::vector<Polyline> lines;
  lines.reserve(graph.centerlines.size());
  for (const BezierCenterline& c : graph.centerlines) {
    lines.push_back(interpolate(c, kInterpolationPoints));
  }
  return lines;
}

double harmonic_f(double precision, double recall) {
  if (precision + recall == 0.0) {
    return 0.0;
  }
  return 2.0 * precision * recall / (precision + recall);
}

/// Fraction of `from` points with some `to` point within match_dist.
double coverage_fraction(const std::vector<Polyline>& from,
                         const std::vector<Polyline>& to, double match_dist) {
  std::int64_t total = 0;
  std::int64_t covered = 0;
  for (const Polyline& line : from) {
    for (const PlanarPoint& p : line.points) {
      ++total;
      bool hit = false;
      for (const Polyline& other : to) {
        for (const PlanarPoint& q : other.points) {
          if ((p - q).norm() <= match_dist) {
            hit = true;
            break;
          }
        }
        if (hit) {
          break;
        }
      }
      covered += hit ? 1 : 0;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(covered) / total;
}

/// Symmetric mean Chamfer distance between two polylines.
double mean_polyline_distance(const Polyline& a, const Polyline& b) {
  auto one_way = [](const Polyline& from, const Polyline& to) {
    double sum = 0.0;
    for (const PlanarPoint& p : from.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const PlanarPoint& q : to.points) {
        best = std::min(best, (p - q).norm());
      }
      sum += best;
    }
    return sum / static_cast<double>(from.points.size());
  };
  return 0.5 * (one_way(a, b) + one_way(b, a));
}

}  // namespace

double centerline_f(const LaneGraph& pred, const LaneGraph& gt,
                    double match_dist) {
  const bool pred_empty = pred.centerlines.empty();
  const bool gt_empty = gt.centerlines.empty();
  if (pred_empty && gt_empty) {
    return 1.0;
  }
  if (pred_empty || gt_empty) {
    return 0.0;
  }
  const std::vector<Polyline> pred_lines = interpolate_all(pred);
  const std::vector<Polyline> gt_lines = interpolate_all(gt);
  const double precision =
      coverage_fraction(pred_lines, gt_lines, match_dist);
  const double recall = coverage_fraction(gt_lines, pred_lines, match_dist);
  return harmonic_f(precision, recall);
}

DetectionResult detection_f(const LaneGraph& pred, const LaneGraph& gt,
                            double match_dist) {
  DetectionResult result;
  const int np = static_cast<int>(pred.centerlines.size());
  const int ng = static_cast<int>(gt.centerlines.size());
  if (np == 0 && ng == 0) {
    result.score = 1.0;
    return result;
  }
  if (np == 0 || ng == 0) {
    result.score = 0.0;
    return result;
  }
  const std::vector<Polyline> pred_lines = interpolate_all(pred);
  const std::vector<Polyline> gt_lines = interpolate_all(gt);

  struct PairDist {
    double dist;
    int pred;
    int gt;
  };
  std::vector<PairDist> pairs;
  pairs.reserve(static_cast<size_t>(np) * ng);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < ng; ++j) {
      const double d = mean_polyline_distance(pred_lines[i], gt_lines[j]);
      if (d < match_dist) {
        pairs.push_back({d, i, j});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairDist& a,
                                           const PairDist& b) {
    if (a.dist != b.dist) {
      return a.dist < b.dist;
    }
    if (a.pred != b.pred) {
      return a.pred < b.pred;
    }
    return a.gt < b.gt;
  });

  std::vector<bool> pred_used(np, false);
  std::vector<bool> gt_used(ng, false);
  for (const PairDist& pair : pairs) {
    if (pred_used[pair.pred] || gt_used[pair.gt]) {
      continue;
    }
    pred_used[pair.pred] = true;
    gt_used[pair.gt] = true;
    result.matched_pairs.emplace_back(pair.pred, pair.gt);
  }
  const double tp = static_cast<double>(result.matched_pairs.size());
  const double precision = tp / np;
  const double recall = tp / ng;
  result.score = harmonic_f(precision, recall);
  return result;
}

double connectivity_f(const LaneGraph& pred, const LaneGraph& gt,
                      const std::vector<std::pair<int, int>>& matched_pairs) {
  if (matched_pairs.empty()) {
    return (pred.incidence.edge_count() == 0 &&
            gt.incidence.edge_count() == 0)
               ? 1.0
               : 0.0;
  }
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  for (const auto& [pred_from, gt_from] : matched_pairs) {
    for (const auto& [pred_to, gt_to] : matched_pairs) {
      if (pred_from == pred_to) {
        continue;
      }
      const bool in_pred = pred.incidence.at(pred_from, pred_to);
      const bool in_gt = gt.incidence.at(gt_from, gt_to);
      tp += (in_pred && in_gt) ? 1 : 0;
      fp += (in_pred && !in_gt) ? 1 : 0;
      fn += (!in_pred && in_gt) ? 1 : 0;
    }
  }
  const double precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) /
                                                    (tp + fp);
  const double recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) /
                                                 (tp + fn);
  if (tp == 0 && fp == 0 && fn == 0) {
    return 1.0;
  }
  return harmonic_f(precision, recall);
}

EvalReport evaluate(const LaneGraph& pred, const LaneGraph& gt,
                    double match_dist) {
  EvalReport report;
  report.mean_f = centerline_f(pred, gt, match_dist);
  DetectionResult detection = detection_f(pred, gt, match_dist);
  report.detect_f = detection.score;
  report.matched_pairs = std::move(detection.matched_pairs);
  report.connect_f = connectivity_f(pred, gt, report.matched_pairs);
  return report;
}

}  // namespace lgk

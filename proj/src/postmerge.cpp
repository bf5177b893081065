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

#include "lgk/postmerge.hpp"

#include <stdexcept>

namespace lgk {

void FrameEstimate::ensure_consistent() const {
  const size_t q = control_points.size();
  if (probabilities.size() != q || polylines.size() != q ||
      connectivity.size() != q * q) {
    throw std::invalid_argument("FrameEstimate: field sizes disagree");
  }
  for (const Polyline& line : polylines) {
    if (line.points.size() != polylines.front().points.size()) {
      throw std::invalid_argument(
          "FrameEstimate: polylines have mixed point counts");
    }
  }
}

FrameEstimate FrameEstimate::from_control_points(
    std::vector<BezierCenterline> control_points,
    std::vector<double> probabilities, std::vector<double> connectivity,
    double relative_time, int omega) {
  FrameEstimate estimate;
  estimate.control_points = std::move(control_points);
  estimate.probabilities = std::move(probabilities);
  estimate.connectivity = std::move(connectivity);
  estimate.relative_time = relative_time;
  estimate.polylines.reserve(estimate.control_points.size());
  for (const BezierCenterline& line : estimate.control_points) {
    estimate.polylines.push_back(interpolate(line, omega));
  }
  estimate.ensure_consistent();
  return estimate;
}

void MergeParams::ensure_valid() const {
  if (!(prob_thresh >= 0.0 && prob_thresh <= 1.0)) {
    throw std::invalid_argument("MergeParams: prob_thresh outside [0, 1]");
  }
  if (!(dir_thresh >= -1.0 && dir_thresh <= 1.0)) {
    throw std::invalid_argument("MergeParams: dir_thresh outside [-1, 1]");
  }
  if (!(dist_thresh > 0.0)) {
    throw std::invalid_argument("MergeParams: dist_thresh must be positive");
  }
}

FrameEstimate filter_by_probability(const FrameEstimate& estimate,
                                    double prob_thresh) {
  estimate.ensure_consistent();
  std::vector<int> kept;
  for (int i = 0; i < estimate.count(); ++i) {
    if (estimate.probabilities[i] >= prob_thresh) {
      kept.push_back(i);
    }
  }
  FrameEstimate out;
  out.relative_time = estimate.relative_time;
  out.control_points.reserve(kept.size());
  out.probabilities.reserve(kept.size());
  out.polylines.reserve(kept.size());
  out.connectivity.reserve(kept.size() * kept.size());
  for (const int i : kept) {
    out.control_points.push_back(estimate.control_points[i]);
    out.probabilities.push_back(estimate.probabilities[i]);
    out.polylines.push_back(estimate.polylines[i]);
  }
  for (const int i : kept) {
    for (const int j : kept) {
      out.connectivity.push_back(estimate.conn(i, j));
    }
  }
  return out;
}

namespace {

struct Candidate {
  const BezierCenterline* control_points;
  const Polyline* polyline;
  PlanarPoint direction;
  bool directed;  // false for degenerate candidates, which never match
};

/// Directions are fixed once, after filtering; updates to a reference line
/// do not re-steer its direction test against later candidates.
std::vector<Candidate> collect_candidates(
    std::span<const FrameEstimate> others) {
  std::vector<Candidate> candidates;
  for (const FrameEstimate& estimate : others) {
    for (int j = 0; j < estimate.count(); ++j) {
      Candidate c{&estimate.control_points[j], &estimate.polylines[j],
                  PlanarPoint::Zero(), false};
      try {
        c.direction = direction_vector(estimate.control_points[j]);
        c.directed = true;
      } catch (const DegenerateCenterline&) {
      }
      candidates.push_back(c);
    }
  }
  return candidates;
}

}  // namespace

FrameEstimate match_and_update(const FrameEstimate& reference,
                               std::span<const FrameEstimate> others,
                               const MergeParams& params) {
  params.ensure_valid();
  reference.ensure_consistent();
  for (const FrameEstimate& other : others) {
    other.ensure_consistent();
  }

  FrameEstimate merged = reference;
  const std::vector<Candidate> candidates = collect_candidates(others);
  const int omega = merged.polylines.empty()
                        ? kInterpolationPoints
                        : static_cast<int>(merged.polylines[0].points.size());

  for (int i = 0; i < merged.count(); ++i) {
    PlanarPoint ref_dir;
    try {
      ref_dir = direction_vector(merged.control_points[i]);
    } catch (const DegenerateCenterline&) {
      continue;
    }

    for (const Candidate& candidate : candidates) {
      if (!candidate.directed ||
          !(ref_dir.dot(candidate.direction) > params.dir_thresh)) {
        continue;
      }

      // A reference point "hits" when some candidate point lies within
      // dist_thresh; the candidate is accepted when more than half of the
      // reference points hit.
      const Polyline& ref_line = merged.polylines[i];
      const Polyline& cand_line = *candidate.polyline;
      int hits = 0;
      for (const PlanarPoint& p : ref_line.points) {
        for (const PlanarPoint& q : cand_line.points) {
          if ((p - q).norm() < params.dist_thresh) {
            ++hits;
            break;
          }
        }
      }
      if (!(hits > 0.5 * ref_line.points.size())) {
        continue;
      }

      double head_dist = std::numeric_limits<double>::infinity();
      double tail_dist = std::numeric_limits<double>::infinity();
      for (const PlanarPoint& q : cand_line.points) {
        head_dist = std::min(head_dist, (ref_line.points.front() - q).norm());
        tail_dist = std::min(tail_dist, (ref_line.points.back() - q).norm());
      }

      // Splice onto the end that sits farther from the candidate; the
      // closer end is the overlap side and gets replaced.
      const BezierCenterline& cand_cp = *candidate.control_points;
      BezierCenterline& ref_cp = merged.control_points[i];
      if (head_dist >= tail_dist) {
        ref_cp = BezierCenterline{{ref_cp.control_points[0],
                                   cand_cp.control_points[1],
                                   cand_cp.control_points[2]}};
      } else {
        ref_cp = BezierCenterline{{cand_cp.control_points[0],
                                   cand_cp.control_points[1],
                                   ref_cp.control_points[2]}};
      }
      merged.polylines[i] = interpolate(ref_cp, omega);
    }
  }
  return merged;
}

LaneGraph post_merge(std::span<const FrameEstimate> estimates,
                     int reference_index, const MergeParams& params,
                     double connect_tol) {
  params.ensure_valid();
  if (estimates.empty()) {
    throw std::invalid_argument("post_merge: no estimates");
  }
  if (reference_index < 0 ||
      reference_index >= static_cast<int>(estimates.size())) {
    throw std::invalid_argument("post_merge: reference index out of range");
  }

  std::vector<FrameEstimate> filtered;
  filtered.reserve(estimates.size());
  for (const FrameEstimate& estimate : estimates) {
    filtered.push_back(filter_by_probability(estimate, params.prob_thresh));
  }

  std::vector<FrameEstimate> others;
  others.reserve(filtered.size() - 1);
  for (size_t n = 0; n < filtered.size(); ++n) {
    if (static_cast<int>(n) != reference_index) {
      others.push_back(std::move(filtered[n]));
    }
  }
  const FrameEstimate merged =
      match_and_update(filtered[reference_index], others, params);

  LaneGraph graph;
  graph.centerlines = merged.control_points;
  graph.incidence = build_incidence(graph.centerlines, connect_tol);
  for (int from = 0; from < merged.count(); ++from) {
    for (int to = 0; to < merged.count(); ++to) {
      if (from != to && merged.conn(from, to) >= kConnectivityThresh) {
        graph.incidence.set(from, to, true);
      }
    }
  }
  return graph;
}

}  // namespace lgk

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

#include "lgk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lgk/rng.hpp"

namespace lgk {

namespace {

constexpr double kLaneWidth = 3.5;
constexpr double kMinPieceLength = 2.0;

BezierCenterline straight(const PlanarPoint& from, const PlanarPoint& to) {
  return {{from, 0.5 * (from + to), to}};
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Signed lateral offsets 0, +w, -w, +2w, ... for `lanes` parallel lanes.
std::vector<double> lane_offsets(int lanes) {
  std::vector<double> offsets;
  offsets.reserve(lanes);
  for (int k = 0; k < lanes; ++k) {
    const int step = (k + 1) / 2;
    offsets.push_back((k % 2 == 1 ? 1.0 : -1.0) * step * kLaneWidth);
  }
  offsets[0] = 0.0;
  return offsets;
}

double arc_length_estimate(const BezierCenterline& c) {
  double length = 0.0;
  PlanarPoint prev = bezier_eval(c, 0.0);
  for (int k = 1; k <= 16; ++k) {
    const PlanarPoint p = bezier_eval(c, k / 16.0);
    length += (p - prev).norm();
    prev = p;
  }
  return length;
}

/// Maximal parameter intervals of c where `inside` holds, boundaries
/// refined by bisection.
std::vector<std::pair<double, double>> visible_intervals(
    const BezierCenterline& c,
    const std::function<bool(const PlanarPoint&)>& inside) {
  constexpr int kSamples = 600;
  constexpr int kBisectIters = 40;
  auto in = [&](double t) { return inside(bezier_eval(c, t)); };
  auto refine = [&](double t_out, double t_in) {
    for (int iter = 0; iter < kBisectIters; ++iter) {
      const double mid = 0.5 * (t_out + t_in);
      (in(mid) ? t_in : t_out) = mid;
    }
    return t_in;
  };

  std::vector<std::pair<double, double>> intervals;
  double start = -1.0;
  bool was_in = false;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = static_cast<double>(k) / kSamples;
    const bool now_in = in(t);
    if (now_in && !was_in) {
      start = k == 0 ? 0.0 : refine((k - 1.0) / kSamples, t);
    } else if (!now_in && was_in) {
      intervals.emplace_back(start, refine(t, (k - 1.0) / kSamples));
    }
    was_in = now_in;
  }
  if (was_in) {
    intervals.emplace_back(start, 1.0);
  }
  return intervals;
}

}  // namespace

void NoiseParams::ensure_valid() const {
  if (control_point_sigma < 0.0 || false_positive_rate < 0.0 ||
      prob_noise_sigma < 0.0) {
    throw std::invalid_argument("NoiseParams: negative parameter");
  }
  if (fragment_probability < 0.0 || fragment_probability > 1.0 ||
      dropout_probability < 0.0 || dropout_probability > 1.0) {
    throw std::invalid_argument("NoiseParams: probability outside [0, 1]");
  }
}

SyntheticScene generate_scene(std::uint64_t seed, Layout layout, int lanes) {
  if (lanes < 1) {
    throw std::invalid_argument("generate_scene: need at least 1 lane");
  }
  Rng rng(seed);
  const double speed = rng.uniform(4.0, 5.5);  // m/s, urban
  const double travel = speed * kTrajectoryDurationSeconds;
  const double z_lo = -40.0;
  const double z_hi = travel + 80.0;
  const double z_mid = 0.5 * travel;

  SyntheticScene scene;
  std::vector<BezierCenterline>& lines = scene.gt_graph.centerlines;
  const std::vector<double> offsets = lane_offsets(lanes);

  switch (layout) {
    case Layout::Straight: {
      for (const double x : offsets) {
        lines.push_back(straight({x, z_lo}, {x, z_hi}));
      }
      break;
    }
    case Layout::Merge: {
      // Main lane split at the merge point so the continuation has inbound
      // edges from both the main approach and every ramp.
      lines.push_back(straight({0.0, z_lo}, {0.0, z_mid}));   // approach
      lines.push_back(straight({0.0, z_mid}, {0.0, z_hi}));   // continuation
      for (int k = 1; k < lanes; ++k) {
        const double x = offsets[k];
        const double ramp_end = z_mid - 26.0 - 4.0 * k;
        lines.push_back(straight({x, z_lo}, {x, ramp_end}));
        lines.push_back(BezierCenterline{{PlanarPoint(x, ramp_end),
                                          PlanarPoint(x, z_mid - 7.0),
                                          PlanarPoint(0.0, z_mid)}});
      }
      break;
    }
    case Layout::Intersection: {
      const double half = 6.0;
      const double x_far = 50.0;
      for (const double x : offsets) {
        lines.push_back(straight({x, z_lo}, {x, z_mid - half}));   // approach
        lines.push_back(straight({x, z_mid - half}, {x, z_mid + half}));
        lines.push_back(straight({x, z_mid + half}, {x, z_hi}));   // exit
      }
      // Crossing road, traffic toward +x.
      lines.push_back(straight({-x_far, z_mid}, {-half, z_mid}));
      lines.push_back(straight({-half, z_mid}, {half, z_mid}));
      lines.push_back(straight({half, z_mid}, {x_far, z_mid}));
      // Right-turn connector from the main approach onto the crossing exit.
      lines.push_back(BezierCenterline{{PlanarPoint(0.0, z_mid - half),
                                        PlanarPoint(0.0, z_mid),
                                        PlanarPoint(half, z_mid)}});
      break;
    }
  }
  scene.gt_graph.incidence =
      build_incidence(scene.gt_graph.centerlines, kDefaultConnectTol);

  const int steps = static_cast<int>(kTrajectoryDurationSeconds /
                                     kTrajectoryStepSeconds);
  scene.ego_trajectory.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = k * kTrajectoryStepSeconds;
    TimedPose timed;
    timed.timestamp = t;
    timed.pose.translation = Eigen::Vector3d(0.0, 0.0, speed * t);
    scene.ego_trajectory.push_back(timed);
  }

  scene.rig_template.intrinsics = {300.0, 300.0, 319.5, 90.0};
  scene.rig_template.cam_from_ego.translation = Eigen::Vector3d(0.0, 1.5,
                                                                0.0);
  scene.rig_template.camera_height = 1.5;
  return scene;
}

std::vector<FrameEstimate> simulate_frame_estimates(
    const SyntheticScene& scene, std::span<const int> frame_indices,
    const NoiseParams& noise, std::uint64_t seed) {
  noise.ensure_valid();
  if (frame_indices.empty()) {
    throw std::invalid_argument("simulate_frame_estimates: no frames");
  }
  for (const int index : frame_indices) {
    if (index < 0 ||
        index >= static_cast<int>(scene.ego_trajectory.size())) {
      throw std::invalid_argument(
          "simulate_frame_estimates: frame index outside trajectory");
    }
  }
  const Window window;  // default target window of the default grid
  const int gt_count = static_cast<int>(scene.gt_graph.centerlines.size());
  const double ref_time =
      scene.ego_trajectory[frame_indices[frame_indices.size() / 2]]
          .timestamp;

  Rng rng(seed);
  std::vector<FrameEstimate> estimates;
  estimates.reserve(frame_indices.size());

  for (const int index : frame_indices) {
    const TimedPose& timed = scene.ego_trajectory[index];
    const RigidTransform ego_from_global = timed.pose.inverse();

    struct TrueLine {
      BezierCenterline curve;
      int parent;
      double t0, t1;      // parameter interval on the parent line
      bool covers_start;  // interval begins at the parent's start
      bool covers_end;    // interval ends at the parent's end
    };
    std::vector<TrueLine> kept;

    for (int parent = 0; parent < gt_count; ++parent) {
      BezierCenterline ego_line = scene.gt_graph.centerlines[parent];
      for (PlanarPoint& p : ego_line.control_points) {
        p = apply_planar(ego_from_global, p);
      }
      const auto intervals = visible_intervals(
          ego_line, [&](const PlanarPoint& p) { return window.contains(p); });
      for (const auto& [t0, t1] : intervals) {
        const BezierCenterline piece = subcurve(ego_line, t0, t1);
        if (arc_length_estimate(piece) < kMinPieceLength) {
          continue;
        }
        // Fragment into an exact two-piece partition, cut near the middle
        // so each piece reaches one end of the visible interval.
        std::vector<double> cuts{t0, t1};
        if (rng.bernoulli(noise.fragment_probability) &&
            arc_length_estimate(piece) >= 2.0 * kMinPieceLength) {
          cuts.push_back(t0 + (t1 - t0) * (0.5 + rng.uniform(-0.1, 0.1)));
          std::sort(cuts.begin(), cuts.end());
        }
        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
          TrueLine line;
          line.curve = subcurve(ego_line, cuts[c], cuts[c + 1]);
          line.parent = parent;
          line.t0 = cuts[c];
          line.t1 = cuts[c + 1];
          line.covers_start = cuts[c] < 1e-9;
          line.covers_end = cuts[c + 1] > 1.0 - 1e-9;
          kept.push_back(line);
        }
      }
    }

    // Dropout, then control-point jitter.
    std::vector<TrueLine> emitted;
    for (TrueLine& line : kept) {
      if (rng.bernoulli(noise.dropout_probability)) {
        continue;
      }
      for (PlanarPoint& p : line.curve.control_points) {
        p.x() += rng.normal(noise.control_point_sigma);
        p.y() += rng.normal(noise.control_point_sigma);
      }
      emitted.push_back(line);
    }

    std::vector<BezierCenterline> control_points;
    std::vector<double> probabilities;
    for (const TrueLine& line : emitted) {
      control_points.push_back(line.curve);
      probabilities.push_back(
          sigmoid(logit(0.95) + rng.normal(noise.prob_noise_sigma)));
    }

    // False positives: short random curves inside the window.
    const int fp_count = rng.poisson(noise.false_positive_rate);
    for (int f = 0; f < fp_count; ++f) {
      const PlanarPoint start(rng.uniform(window.x_min, window.x_max),
                              rng.uniform(window.z_min, window.z_max));
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      const double length = rng.uniform(8.0, 20.0);
      const PlanarPoint dir(std::sin(angle), std::cos(angle));
      const PlanarPoint normal(dir.y(), -dir.x());
      const PlanarPoint end = start + length * dir;
      const PlanarPoint mid =
          0.5 * (start + end) + rng.uniform(-2.0, 2.0) * normal;
      control_points.push_back(BezierCenterline{{start, mid, end}});
      probabilities.push_back(rng.uniform(0.0, 0.5));
    }

    const int q = static_cast<int>(control_points.size());
    std::vector<double> connectivity(static_cast<size_t>(q) * q);
    auto conn_score = [&](bool connected) {
      const double base = connected ? logit(0.9) : logit(0.05);
      return sigmoid(base + rng.normal(noise.prob_noise_sigma));
    };
    const int true_count = static_cast<int>(emitted.size());
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        bool connected = false;
        if (a != b && a < true_count && b < true_count) {
          const TrueLine& la = emitted[a];
          const TrueLine& lb = emitted[b];
          if (la.parent == lb.parent) {
            // Consecutive fragments of one parent line.
            connected = std::abs(la.t1 - lb.t0) < 1e-6;
          } else if (scene.gt_graph.incidence.at(la.parent, lb.parent)) {
            connected = la.covers_end && lb.covers_start;
          }
        }
        connectivity[static_cast<size_t>(a) * q + b] =
            a == b ? 0.0 : conn_score(connected);
      }
    }

    estimates.push_back(FrameEstimate::from_control_points(
        std::move(control_points), std::move(probabilities),
        std::move(connectivity), timed.timestamp - ref_time));
  }
  return estimates;
}

FeatureMap render_ground_pattern(const GroundPattern& pattern,
                                 const CameraRig& rig, ImageDims dims,
                                 Exec exec) {
  if (dims.height <= 0 || dims.width <= 0) {
    throw std::invalid_argument("render_ground_pattern: empty image");
  }
  FeatureMap image(dims.height, dims.width, 1);
  for_each_index(dims.height, exec, [&](int row) {
    for (int col = 0; col < dims.width; ++col) {
      const GroundHit hit = pixel_to_ground(rig, col, row);
      if (hit.valid) {
        image.at(row, col, 0) =
            static_cast<float>(pattern(hit.point.x(), hit.point.y()));
      }
    }
  });
  return image;
}

LaneGraph transform_graph(const LaneGraph& graph,
                          const RigidTransform& target_from_source) {
  LaneGraph out = graph;
  for (BezierCenterline& line : out.centerlines) {
    for (PlanarPoint& p : line.control_points) {
      p = apply_planar(target_from_source, p);
    }
  }
  return out;
}

LaneGraph clip_graph(const LaneGraph& graph,
                     const std::function<bool(const PlanarPoint&)>& inside,
                     double min_length, double connect_tol) {
  LaneGraph out;
  for (const BezierCenterline& line : graph.centerlines) {
    for (const auto& [t0, t1] : visible_intervals(line, inside)) {
      const BezierCenterline piece = subcurve(line, t0, t1);
      if (arc_length_estimate(piece) >= min_length) {
        out.centerlines.push_back(piece);
      }
    }
  }
  out.incidence = build_incidence(out.centerlines, connect_tol);
  return out;
}

LaneGraph clip_graph_to_window(const LaneGraph& graph, const Window& window,
                               double min_length, double connect_tol) {
  return clip_graph(
      graph, [&window](const PlanarPoint& p) { return window.contains(p); },
      min_length, connect_tol);
}

FrameEstimate estimate_in_frame(const FrameEstimate& estimate,
                                const RigidTransform& target_from_source) {
  const int omega = estimate.polylines.empty()
                        ? kInterpolationPoints
                        : static_cast<int>(
                              estimate.polylines[0].points.size());
  std::vector<BezierCenterline> moved = estimate.control_points;
  for (BezierCenterline& line : moved) {
    for (PlanarPoint& p : line.control_points) {
      p = apply_planar(target_from_source, p);
    }
  }
  FrameEstimate out = FrameEstimate::from_control_points(
      std::move(moved), estimate.probabilities, estimate.connectivity,
      estimate.relative_time, omega);
  return out;
}

}  // namespace lgk

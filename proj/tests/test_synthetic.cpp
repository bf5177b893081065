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

#include <doctest.h>

#include <cmath>

#include "lgk/io.hpp"
#include "lgk/metrics.hpp"
#include "lgk/synthetic.hpp"
#include "support/oracles.hpp"

using lgk::Layout;
using lgk::NoiseParams;
using lgk::PlanarPoint;
using lgk::SyntheticScene;

namespace {

std::vector<int> three_frames(const SyntheticScene& scene, double dt = 2.0) {
  const int stride =
      static_cast<int>(std::round(dt / lgk::kTrajectoryStepSeconds));
  const int mid = static_cast<int>(scene.ego_trajectory.size()) / 2;
  return {mid - stride, mid, mid + stride};
}

/// Distance from a point to the nearest ground-truth centerline, with the
/// graph expressed in the same frame as the point.
double distance_to_graph(const lgk::LaneGraph& graph, const PlanarPoint& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const lgk::BezierCenterline& line : graph.centerlines) {
    best = std::min(best, lgk::test::point_to_curve_distance(line, p));
  }
  return best;
}

}  // namespace

TEST_CASE("scene generation is deterministic per seed") {
  const SyntheticScene a = lgk::generate_scene(12, Layout::Merge, 2);
  const SyntheticScene b = lgk::generate_scene(12, Layout::Merge, 2);
  CHECK(lgk::io::scene_to_json(a) == lgk::io::scene_to_json(b));
  const SyntheticScene c = lgk::generate_scene(13, Layout::Merge, 2);
  CHECK(lgk::io::scene_to_json(a) != lgk::io::scene_to_json(c));
}

TEST_CASE("layout contracts") {
  SUBCASE("straight lanes are parallel and unconnected") {
    const SyntheticScene scene = lgk::generate_scene(1, Layout::Straight, 2);
    CHECK(scene.gt_graph.centerlines.size() == 2);
    CHECK(scene.gt_graph.incidence.edge_count() == 0);
    CHECK(lgk::validate(scene.gt_graph).empty());
  }
  SUBCASE("merge layouts contain at least one edge") {
    for (const std::uint64_t seed : {1, 2, 3}) {
      const SyntheticScene scene = lgk::generate_scene(seed, Layout::Merge,
                                                       2);
      CHECK(scene.gt_graph.incidence.edge_count() >= 1);
      CHECK(lgk::validate(scene.gt_graph).empty());
    }
  }
  SUBCASE("intersections contain at least two edges") {
    for (const std::uint64_t seed : {1, 2, 3}) {
      const SyntheticScene scene =
          lgk::generate_scene(seed, Layout::Intersection, 1);
      CHECK(lgk::build_incidence(scene.gt_graph.centerlines).edge_count() >=
            2);
      CHECK(lgk::validate(scene.gt_graph).empty());
    }
  }
  CHECK_THROWS_AS(lgk::generate_scene(1, Layout::Straight, 0),
                  std::invalid_argument);
}

TEST_CASE("trajectory cadence stays within the FOV margin") {
  for (const std::uint64_t seed : {5, 6, 7, 8}) {
    const SyntheticScene scene = lgk::generate_scene(seed, Layout::Straight,
                                                     2);
    REQUIRE(scene.ego_trajectory.size() >= 2);
    const lgk::BevGrid grid;
    for (size_t k = 1; k < scene.ego_trajectory.size(); ++k) {
      CHECK(scene.ego_trajectory[k].timestamp >
            scene.ego_trajectory[k - 1].timestamp);
      const double step = (scene.ego_trajectory[k].pose.translation -
                           scene.ego_trajectory[k - 1].pose.translation)
                              .norm();
      CHECK(step <= grid.fov_margin);
    }
  }
}

TEST_CASE("zero-noise estimates lie exactly on the ground truth") {
  const SyntheticScene scene = lgk::generate_scene(21, Layout::Straight, 2);
  const std::vector<int> frames = three_frames(scene);
  const auto estimates =
      lgk::simulate_frame_estimates(scene, frames, NoiseParams{}, 77);
  REQUIRE(estimates.size() == 3);
  for (size_t n = 0; n < estimates.size(); ++n) {
    REQUIRE(estimates[n].count() >= 2);
    const lgk::LaneGraph gt_in_frame = lgk::transform_graph(
        scene.gt_graph,
        scene.ego_trajectory[frames[n]].pose.inverse());
    for (const lgk::Polyline& line : estimates[n].polylines) {
      for (const PlanarPoint& p : line.points) {
        CHECK(distance_to_graph(gt_in_frame, p) <= 1e-9);
      }
    }
  }
  CHECK(estimates[0].relative_time == doctest::Approx(-2.0));
  CHECK(estimates[1].relative_time == doctest::Approx(0.0));
  CHECK(estimates[2].relative_time == doctest::Approx(2.0));
}

TEST_CASE("full dropout produces empty estimates") {
  const SyntheticScene scene = lgk::generate_scene(22, Layout::Straight, 2);
  NoiseParams noise;
  noise.dropout_probability = 1.0;
  const auto estimates = lgk::simulate_frame_estimates(
      scene, three_frames(scene), noise, 1);
  for (const lgk::FrameEstimate& e : estimates) {
    CHECK(e.count() == 0);
  }
}

TEST_CASE("forced fragmentation splits lines and covers the visible span") {
  const SyntheticScene scene = lgk::generate_scene(23, Layout::Straight, 1);
  NoiseParams noise;
  noise.fragment_probability = 1.0;
  const std::vector<int> frames{static_cast<int>(
      scene.ego_trajectory.size() / 2)};
  const auto fragmented =
      lgk::simulate_frame_estimates(scene, frames, noise, 5);
  const auto whole =
      lgk::simulate_frame_estimates(scene, frames, NoiseParams{}, 5);
  REQUIRE(whole[0].count() == 1);
  REQUIRE(fragmented[0].count() >= 2);

  // Union coverage: every point of the unfragmented line is close to some
  // fragment.
  for (const PlanarPoint& p : whole[0].polylines[0].points) {
    double best = std::numeric_limits<double>::infinity();
    for (const lgk::BezierCenterline& piece : fragmented[0].control_points) {
      best = std::min(best, lgk::test::point_to_curve_distance(piece, p));
    }
    CHECK(best <= 1e-6);
  }

  // Fragments are chained in the connectivity scores.
  int chained = 0;
  for (int a = 0; a < fragmented[0].count(); ++a) {
    for (int b = 0; b < fragmented[0].count(); ++b) {
      if (a != b && fragmented[0].conn(a, b) >= 0.5) {
        ++chained;
      }
    }
  }
  CHECK(chained == fragmented[0].count() - 1);
}

TEST_CASE("false positives carry sub-threshold probabilities") {
  const SyntheticScene scene = lgk::generate_scene(24, Layout::Straight, 2);
  NoiseParams noise;
  noise.false_positive_rate = 3.0;
  noise.dropout_probability = 1.0;  // only false positives remain
  const auto estimates = lgk::simulate_frame_estimates(
      scene, three_frames(scene), noise, 9);
  int total = 0;
  for (const lgk::FrameEstimate& e : estimates) {
    total += e.count();
    for (const double p : e.probabilities) {
      CHECK(p < 0.5);
    }
  }
  CHECK(total > 0);
}

TEST_CASE("zero-noise estimates evaluate to 1.0 within their window") {
  const SyntheticScene scene = lgk::generate_scene(25, Layout::Straight, 3);
  const std::vector<int> frames = three_frames(scene);
  const auto estimates =
      lgk::simulate_frame_estimates(scene, frames, NoiseParams{}, 3);
  for (size_t n = 0; n < estimates.size(); ++n) {
    lgk::LaneGraph pred;
    pred.centerlines = estimates[n].control_points;
    pred.incidence = lgk::build_incidence(pred.centerlines);
    const lgk::LaneGraph gt_window = lgk::clip_graph_to_window(
        lgk::transform_graph(scene.gt_graph,
                             scene.ego_trajectory[frames[n]].pose.inverse()),
        lgk::Window{});
    const lgk::EvalReport report = lgk::evaluate(pred, gt_window);
    CHECK(report.mean_f >= 0.999);
    CHECK(report.detect_f == 1.0);
    CHECK(report.connect_f == 1.0);
  }
}

TEST_CASE("render_ground_pattern fills below-horizon pixels") {
  lgk::CameraRig rig;
  rig.intrinsics = {300.0, 300.0, 319.5, 60.0};
  rig.cam_from_ego.translation = Eigen::Vector3d(0.0, 1.5, 0.0);
  rig.camera_height = 1.5;
  const lgk::ImageDims dims{240, 640};

  SUBCASE("constant pattern renders the constant below the horizon") {
    const lgk::FeatureMap image = lgk::render_ground_pattern(
        [](double, double) { return 2.5; }, rig, dims);
    for (int row = 0; row < dims.height; ++row) {
      for (int col = 0; col < dims.width; ++col) {
        if (row <= 60) {
          CHECK(image.at(row, col, 0) == 0.0f);  // horizon and above
        } else if (row >= 64) {
          // Rows 61..63 fall inside the near-horizon margin at some columns.
          CHECK(image.at(row, col, 0) == 2.5f);
        }
      }
    }
  }
  SUBCASE("an odd-in-x pattern renders antisymmetrically about the "
          "principal column") {
    const lgk::FeatureMap image = lgk::render_ground_pattern(
        [](double x, double) { return x; }, rig, dims);
    // cx = 319.5: column 319 mirrors column 320.
    for (int row = 70; row < dims.height; row += 13) {
      for (int offset = 0; offset < 300; offset += 7) {
        const float left = image.at(row, 319 - offset, 0);
        const float right = image.at(row, 320 + offset, 0);
        CHECK(left == doctest::Approx(-right).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("clip_graph keeps exactly the in-window parameter spans") {
  lgk::LaneGraph graph;
  graph.centerlines = {{{PlanarPoint(0, -20), PlanarPoint(0, 15),
                         PlanarPoint(0, 60)}}};
  graph.incidence = lgk::IncidenceMatrix(1);
  const lgk::Window window;
  const lgk::LaneGraph clipped = lgk::clip_graph_to_window(graph, window);
  REQUIRE(clipped.centerlines.size() == 1);
  const auto& cp = clipped.centerlines[0].control_points;
  CHECK(cp[0].y() == doctest::Approx(window.z_min).epsilon(1e-6));
  CHECK(cp[2].y() == doctest::Approx(window.z_max).epsilon(1e-6));
  for (int k = 0; k <= 20; ++k) {
    const PlanarPoint p = lgk::bezier_eval(clipped.centerlines[0], k / 20.0);
    CHECK(window.contains(p));
  }
}

TEST_CASE("estimate_in_frame moves control points and polylines rigidly") {
  const SyntheticScene scene = lgk::generate_scene(26, Layout::Straight, 2);
  const std::vector<int> frames = three_frames(scene);
  const auto estimates =
      lgk::simulate_frame_estimates(scene, frames, NoiseParams{}, 4);
  const lgk::RigidTransform ref_from_frame =
      scene.ego_trajectory[frames[1]].pose.inverse() *
      scene.ego_trajectory[frames[0]].pose;
  const lgk::FrameEstimate moved =
      lgk::estimate_in_frame(estimates[0], ref_from_frame);
  REQUIRE(moved.count() == estimates[0].count());
  for (int i = 0; i < moved.count(); ++i) {
    for (size_t k = 0; k < moved.polylines[i].points.size(); ++k) {
      const PlanarPoint expected = lgk::apply_planar(
          ref_from_frame, estimates[0].polylines[i].points[k]);
      CHECK((moved.polylines[i].points[k] - expected).norm() <= 1e-9);
    }
  }
}

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

#include <filesystem>

#include "lgk/io.hpp"
#include "lgk/rng.hpp"
#include "lgk/synthetic.hpp"

namespace io = lgk::io;
using lgk::PlanarPoint;

namespace {

lgk::CameraRig sample_rig() {
  lgk::CameraRig rig;
  rig.intrinsics = {300.0, 290.0, 319.5, 60.25};
  rig.cam_from_ego = lgk::RigidTransform::yaw(0.05,
                                              Eigen::Vector3d(0.1, 1.4, 0.2));
  rig.ego_pose = lgk::RigidTransform::yaw(-1.2,
                                          Eigen::Vector3d(12.5, 0.0, -3.75));
  rig.camera_height = 1.55;
  return rig;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lgk_io_test_" + name);
}

}  // namespace

TEST_CASE("tensor round trip is bit identical") {
  io::Tensor tensor;
  tensor.dims = {196, 200, 8};
  tensor.data.resize(196 * 200 * 8);
  lgk::Rng rng(71);
  for (float& v : tensor.data) {
    v = static_cast<float>(rng.uniform(-100.0, 100.0));
  }
  const std::vector<std::uint8_t> bytes = io::serialize_tensor(tensor);
  const io::Tensor parsed = io::parse_tensor(bytes);
  CHECK(parsed.dims == tensor.dims);
  CHECK(parsed.data == tensor.data);
  CHECK(io::serialize_tensor(parsed) == bytes);

  SUBCASE("file round trip through the atomic writer") {
    const auto path = temp_path("tensor.lgt");
    io::write_tensor(path, tensor);
    const io::Tensor loaded = io::read_tensor(path);
    CHECK(io::serialize_tensor(loaded) == bytes);
    std::filesystem::remove(path);
  }
}

TEST_CASE("tensor parse errors carry byte offsets") {
  io::Tensor tensor;
  tensor.dims = {2, 3};
  tensor.data = {1, 2, 3, 4, 5, 6};
  std::vector<std::uint8_t> bytes = io::serialize_tensor(tensor);

  SUBCASE("bad magic") {
    bytes[1] = 'X';
    CHECK_THROWS_WITH_AS(io::parse_tensor(bytes),
                         doctest::Contains("magic"), io::ParseError);
  }
  SUBCASE("bad version") {
    bytes[4] = 9;
    CHECK_THROWS_WITH_AS(io::parse_tensor(bytes),
                         doctest::Contains("version"), io::ParseError);
  }
  SUBCASE("truncated payload reports expected and found sizes") {
    bytes.resize(bytes.size() - 4);
    try {
      io::parse_tensor(bytes);
      FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
      CHECK(std::string(e.what()).find("expected 24 bytes") !=
            std::string::npos);
      CHECK(std::string(e.what()).find("found 20") != std::string::npos);
      CHECK(e.where() == "byte 20");
    }
  }
  SUBCASE("oversized dims are rejected before allocation") {
    // ndim = 2, dims = [0xffffffff, 0xffffffff].
    std::vector<std::uint8_t> huge(bytes.begin(), bytes.begin() + 12);
    for (int k = 0; k < 8; ++k) {
      huge.push_back(0xff);
    }
    CHECK_THROWS_AS(io::parse_tensor(huge), io::ParseError);
  }
}

TEST_CASE("graph json round trip") {
  lgk::LaneGraph graph;
  graph.centerlines = {
      {{PlanarPoint(0, 0), PlanarPoint(0.125, 5.5), PlanarPoint(0, 11)}},
      {{PlanarPoint(0, 11), PlanarPoint(1.75, 16), PlanarPoint(3.5, 21)}}};
  graph.incidence = lgk::build_incidence(graph.centerlines, 0.5);
  REQUIRE(graph.incidence.at(0, 1));

  const std::string text = io::graph_to_json(graph);
  const lgk::LaneGraph parsed = io::parse_graph(text);
  CHECK(parsed.centerlines.size() == graph.centerlines.size());
  CHECK(parsed.incidence == graph.incidence);
  for (size_t i = 0; i < graph.centerlines.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(parsed.centerlines[i].control_points[k] ==
            graph.centerlines[i].control_points[k]);
    }
  }
  CHECK(io::graph_to_json(parsed) == text);

  SUBCASE("self-loop edges are rejected") {
    std::string bad = text;
    const auto pos = bad.find("\"edges\": [");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 10, "\"edges\": [[1,1],");
    CHECK_THROWS_AS(io::parse_graph(bad), io::ParseError);
  }
  SUBCASE("missing axis convention is rejected") {
    std::string bad = text;
    const auto pos = bad.find("x-right");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 7, "y-right");
    CHECK_THROWS_WITH_AS(io::parse_graph(bad),
                         doctest::Contains("axis convention"),
                         io::ParseError);
  }
}

TEST_CASE("rig json round trip and rotation validation") {
  const lgk::CameraRig rig = sample_rig();
  const std::string text = io::rig_to_json(rig);
  const lgk::CameraRig parsed = io::parse_rig(text);
  CHECK(parsed.intrinsics.fx == rig.intrinsics.fx);
  CHECK(parsed.intrinsics.cy == rig.intrinsics.cy);
  CHECK(parsed.cam_from_ego.rotation == rig.cam_from_ego.rotation);
  CHECK(parsed.cam_from_ego.translation == rig.cam_from_ego.translation);
  CHECK(parsed.ego_pose.rotation == rig.ego_pose.rotation);
  CHECK(parsed.camera_height == rig.camera_height);
  CHECK(io::rig_to_json(parsed) == text);

  SUBCASE("non-orthonormal rotations name the offending matrix") {
    lgk::CameraRig bad = rig;
    bad.ego_pose.rotation(0, 0) += 0.01;
    try {
      io::parse_rig(io::rig_to_json(bad));
      FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
      CHECK(e.where() == "ego_pose.rotation");
    }
  }
  SUBCASE("non-positive camera height is rejected") {
    std::string bad = text;
    const auto pos = bad.find("\"camera_height\": 1.55");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 21, "\"camera_height\": 0.0");
    CHECK_THROWS_WITH_AS(io::parse_rig(bad),
                         doctest::Contains("camera_height"), io::ParseError);
  }
}

TEST_CASE("estimate json round trip") {
  const lgk::SyntheticScene scene =
      lgk::generate_scene(31, lgk::Layout::Merge, 2);
  const std::vector<int> frames{20, 24, 28};
  lgk::NoiseParams noise;
  noise.control_point_sigma = 0.3;
  noise.fragment_probability = 0.6;
  noise.false_positive_rate = 1.0;
  const auto estimates =
      lgk::simulate_frame_estimates(scene, frames, noise, 8);
  REQUIRE(estimates[0].count() > 0);

  const std::string text = io::estimate_to_json(estimates[0]);
  const lgk::FrameEstimate parsed = io::parse_estimate(text);
  CHECK(parsed.count() == estimates[0].count());
  CHECK(parsed.relative_time == estimates[0].relative_time);
  CHECK(parsed.probabilities == estimates[0].probabilities);
  CHECK(parsed.connectivity == estimates[0].connectivity);
  for (int i = 0; i < parsed.count(); ++i) {
    CHECK(parsed.polylines[i].points == estimates[0].polylines[i].points);
  }
  CHECK(io::estimate_to_json(parsed) == text);

  SUBCASE("probability outside [0, 1] is rejected") {
    lgk::FrameEstimate bad = estimates[0];
    bad.probabilities[0] = 1.5;
    CHECK_THROWS_AS(io::parse_estimate(io::estimate_to_json(bad)),
                    io::ParseError);
  }
  SUBCASE("an empty estimate round-trips") {
    lgk::FrameEstimate empty;
    empty.relative_time = -2.0;
    const lgk::FrameEstimate back =
        io::parse_estimate(io::estimate_to_json(empty));
    CHECK(back.count() == 0);
    CHECK(back.relative_time == -2.0);
  }
}

TEST_CASE("scene json round trip") {
  const lgk::SyntheticScene scene =
      lgk::generate_scene(32, lgk::Layout::Intersection, 2);
  const std::string text = io::scene_to_json(scene);
  const lgk::SyntheticScene parsed = io::parse_scene(text);
  CHECK(parsed.ego_trajectory.size() == scene.ego_trajectory.size());
  CHECK(parsed.gt_graph.centerlines.size() ==
        scene.gt_graph.centerlines.size());
  CHECK(parsed.gt_graph.incidence == scene.gt_graph.incidence);
  CHECK(parsed.rig_template.camera_height ==
        scene.rig_template.camera_height);
  CHECK(io::scene_to_json(parsed) == text);

  SUBCASE("non-increasing timestamps are rejected") {
    lgk::SyntheticScene bad = scene;
    bad.ego_trajectory[3].timestamp = bad.ego_trajectory[2].timestamp;
    CHECK_THROWS_WITH_AS(io::parse_scene(io::scene_to_json(bad)),
                         doctest::Contains("strictly increasing"),
                         io::ParseError);
  }
}

TEST_CASE("loaders never crash on arbitrary bytes") {
  lgk::Rng rng(73);
  int parsed_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int length = rng.uniform_int(0, 256);
    std::vector<std::uint8_t> bytes(length);
    for (auto& b : bytes) {
      b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    }
    // Bias some trials toward the right magic so deeper paths run.
    if (trial % 4 == 0 && length >= 4) {
      bytes[0] = 'L';
      bytes[1] = 'G';
      bytes[2] = 'K';
      bytes[3] = 'T';
    }
    const std::string text(bytes.begin(), bytes.end());
    try {
      io::parse_tensor(bytes);
      ++parsed_ok;
    } catch (const io::ParseError&) {
    }
    for (const auto parse : {+[](const std::string& t) {
                               (void)io::parse_graph(t);
                             },
                             +[](const std::string& t) {
                               (void)io::parse_rig(t);
                             },
                             +[](const std::string& t) {
                               (void)io::parse_estimate(t);
                             },
                             +[](const std::string& t) {
                               (void)io::parse_scene(t);
                             }}) {
      try {
        parse(text);
      } catch (const io::ParseError&) {
      }
    }
  }
  // Random bytes virtually never form a valid document.
  CHECK(parsed_ok == 0);
}

TEST_CASE("read_file reports missing files as i/o errors") {
  CHECK_THROWS_AS(io::read_file(temp_path("does_not_exist")), io::IoError);
}

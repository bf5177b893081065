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

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "lgk/bev_warp.hpp"
#include "lgk/io.hpp"
#include "lgk/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(LGK_CLI_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buffer;
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "lgk_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string read_all(const fs::path& path) {
  std::ifstream stream(path, std::ios::binary);
  REQUIRE(stream.good());
  return {std::istreambuf_iterator<char>(stream),
          std::istreambuf_iterator<char>()};
}

bool directories_equal(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names_a, names_b;
  for (const auto& entry : fs::directory_iterator(a)) {
    names_a.push_back(entry.path().filename().string());
  }
  for (const auto& entry : fs::directory_iterator(b)) {
    names_b.push_back(entry.path().filename().string());
  }
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  if (names_a != names_b) {
    return false;
  }
  for (const std::string& name : names_a) {
    if (read_all(a / name) != read_all(b / name)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("help lists every subcommand and exits zero") {
  const RunResult result = run_cli("--help");
  CHECK(result.exit_code == 0);
  for (const char* name : {"synth", "warp", "aggregate", "postmerge", "eval",
                           "embed", "render"}) {
    CHECK(result.output.find(name) != std::string::npos);
  }
  const RunResult synth_help = run_cli("synth --help");
  CHECK(synth_help.exit_code == 0);
  CHECK(synth_help.output.find("seconds") != std::string::npos);
  const RunResult warp_help = run_cli("warp --help");
  CHECK(warp_help.output.find(" m") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("synth").exit_code == 1);              // missing --out
  CHECK(run_cli("doesnotexist").exit_code == 1);       // unknown subcommand
  const fs::path dir = work_dir();
  CHECK(run_cli("synth --layout circular --out " + (dir / "x").string())
            .exit_code == 1);
}

TEST_CASE("missing input files exit with code 2") {
  const fs::path dir = work_dir();
  const RunResult result =
      run_cli("eval --pred " + (dir / "nope.json").string() + " --gt " +
              (dir / "nope.json").string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("nope.json") != std::string::npos);
}

TEST_CASE("corrupt input files exit with code 1") {
  const fs::path dir = work_dir();
  const fs::path bad = dir / "bad_graph.json";
  std::ofstream(bad) << "{\"version\": 1}";
  const RunResult result =
      run_cli("eval --pred " + bad.string() + " --gt " + bad.string());
  CHECK(result.exit_code == 1);
}

TEST_CASE("synth bundles are deterministic per seed") {
  const fs::path dir = work_dir();
  const fs::path a = dir / "seed7a";
  const fs::path b = dir / "seed7b";
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(run_cli("synth --seed 7 --out " + a.string()).exit_code == 0);
  REQUIRE(run_cli("synth --seed 7 --out " + b.string()).exit_code == 0);
  CHECK(directories_equal(a, b));
}

TEST_CASE("aggregating a single warped frame equals the cropped warp") {
  const fs::path dir = work_dir();

  // Inputs: a rendered pattern image plus the rig that took it.
  lgk::CameraRig rig;
  rig.intrinsics = {300.0, 300.0, 319.5, 60.0};
  rig.cam_from_ego.translation = Eigen::Vector3d(0.0, 1.5, 0.0);
  rig.camera_height = 1.5;
  const lgk::FeatureMap image = lgk::render_ground_pattern(
      [](double x, double z) { return 0.3 * x - 0.1 * z; }, rig, {360, 640});
  lgk::io::write_tensor(dir / "image.lgt", lgk::io::to_tensor(image));
  lgk::io::write_rig(dir / "rig.json", rig);

  REQUIRE(run_cli("warp --image " + (dir / "image.lgt").string() + " --rig " +
                  (dir / "rig.json").string() + " --out " +
                  (dir / "warped").string())
              .exit_code == 0);
  REQUIRE(run_cli("aggregate --frames " + (dir / "warped").string() +
                  " --op max --out " + (dir / "agg").string())
              .exit_code == 0);

  const lgk::FeatureMap warped = lgk::io::to_feature_map(
      lgk::io::read_tensor(dir / "warped.lgt"));
  const lgk::FeatureMap aggregated = lgk::io::to_feature_map(
      lgk::io::read_tensor(dir / "agg.lgt"));
  const lgk::BevGrid grid;
  CHECK(aggregated == lgk::crop_to_target(warped, grid));
  CHECK(aggregated.height() == 196);
  CHECK(aggregated.width() == 200);
}

TEST_CASE("the full zero-noise pipeline evaluates above 0.99") {
  const fs::path dir = work_dir();
  const fs::path bundle = dir / "pipeline";
  fs::remove_all(bundle);
  REQUIRE(run_cli("synth --seed 11 --layout straight --lanes 2 --frames 3 "
                  "--dt 2.0 --out " +
                  bundle.string())
              .exit_code == 0);

  const std::string estimates = (bundle / "est_ref_000.json").string() + "," +
                                (bundle / "est_ref_001.json").string() + "," +
                                (bundle / "est_ref_002.json").string();
  REQUIRE(run_cli("postmerge --estimates " + estimates + " --ref 1 --out " +
                  (bundle / "merged.json").string())
              .exit_code == 0);

  const RunResult eval = run_cli(
      "eval --pred " + (bundle / "merged.json").string() + " --gt " +
      (bundle / "gt_ref_union.json").string() + " --out " +
      (bundle / "report.json").string());
  REQUIRE(eval.exit_code == 0);
  const json report = json::parse(read_all(bundle / "report.json"));
  CHECK(report.at("mean_f").get<double>() >= 0.99);
  CHECK(report.at("detect_f").get<double>() >= 0.99);
  CHECK(report.at("connect_f").get<double>() >= 0.99);

  SUBCASE("rendering the merged and ground-truth graphs yields valid SVG") {
    const RunResult render = run_cli(
        "render --graph " + (bundle / "merged.json").string() + " --graph " +
        (bundle / "gt_ref_union.json").string() + " --out " +
        (bundle / "view.svg").string());
    CHECK(render.exit_code == 0);
    const std::string svg = read_all(bundle / "view.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("aggregate validates its frame list") {
  const fs::path dir = work_dir();
  lgk::CameraRig rig;
  rig.intrinsics = {300.0, 300.0, 319.5, 60.0};
  rig.cam_from_ego.translation = Eigen::Vector3d(0.0, 1.5, 0.0);
  rig.camera_height = 1.5;
  const lgk::FeatureMap image(120, 320, 1, 1.0f);
  lgk::io::write_tensor(dir / "flat.lgt", lgk::io::to_tensor(image));
  lgk::io::write_rig(dir / "flat_rig.json", rig);

  REQUIRE(run_cli("warp --image " + (dir / "flat.lgt").string() + " --rig " +
                  (dir / "flat_rig.json").string() + " --relative-time -2 " +
                  "--out " + (dir / "wa").string())
              .exit_code == 0);
  REQUIRE(run_cli("warp --image " + (dir / "flat.lgt").string() + " --rig " +
                  (dir / "flat_rig.json").string() +
                  " --fov-margin 6 --out " + (dir / "wb").string())
              .exit_code == 0);

  SUBCASE("mean over one frame matches max over one frame") {
    REQUIRE(run_cli("aggregate --frames " + (dir / "wa").string() +
                    " --op mean --out " + (dir / "mean1").string())
                .exit_code == 0);
    REQUIRE(run_cli("aggregate --frames " + (dir / "wa").string() +
                    " --op max --out " + (dir / "max1").string())
                .exit_code == 0);
    CHECK(read_all(dir / "mean1.lgt") == read_all(dir / "max1.lgt"));
  }
  SUBCASE("mismatched grids are rejected") {
    const RunResult result =
        run_cli("aggregate --frames " + (dir / "wa").string() + "," +
                (dir / "wb").string() + " --op max --out " +
                (dir / "bad").string());
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("grid") != std::string::npos);
  }
  SUBCASE("unknown op is rejected") {
    CHECK(run_cli("aggregate --frames " + (dir / "wa").string() +
                  " --op median --out " + (dir / "bad2").string())
              .exit_code == 1);
  }
}

TEST_CASE("postmerge validates the reference index") {
  const fs::path dir = work_dir();
  const fs::path bundle = dir / "refcheck";
  fs::remove_all(bundle);
  REQUIRE(run_cli("synth --seed 3 --frames 2 --out " + bundle.string())
              .exit_code == 0);
  const RunResult result = run_cli(
      "postmerge --estimates " + (bundle / "est_ref_000.json").string() +
      "," + (bundle / "est_ref_001.json").string() + " --ref 5 --out " +
      (bundle / "merged.json").string());
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("--ref") != std::string::npos);
}

TEST_CASE("embed writes the token tensor with provenance") {
  const fs::path dir = work_dir();
  REQUIRE(run_cli("embed --n 3 --x 2 --y 2 --f 16 --offsets -1,0,1 --out " +
                  (dir / "tokens").string())
              .exit_code == 0);
  const lgk::io::Tensor tokens = lgk::io::read_tensor(dir / "tokens.lgt");
  REQUIRE(tokens.dims.size() == 2);
  CHECK(tokens.dims[0] == 12);
  CHECK(tokens.dims[1] == 16);
  const json sidecar = json::parse(read_all(dir / "tokens.json"));
  CHECK(sidecar.at("provenance").size() == 12);
  CHECK(sidecar.at("temporal_dim").get<int>() == 4);
}

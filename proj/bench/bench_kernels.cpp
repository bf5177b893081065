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

// Serial reference vs OpenMP kernels on the default grid. Run with
// LGK_THREADS to pin the worker count.

#include <benchmark/benchmark.h>

#include <cmath>

#include "lgk/bev_warp.hpp"
#include "lgk/synthetic.hpp"
#include "lgk/temporal_agg.hpp"

namespace {

lgk::CameraRig bench_rig() {
  lgk::CameraRig rig;
  rig.intrinsics = {300.0, 300.0, 319.5, 60.0};
  rig.cam_from_ego.translation = Eigen::Vector3d(0.0, 1.5, 0.0);
  rig.camera_height = 1.5;
  return rig;
}

double bench_pattern(double x, double z) {
  return std::sin(0.12 * x) * std::cos(0.04 * z);
}

constexpr lgk::ImageDims kDims{360, 640};

const lgk::FeatureMap& bench_image() {
  static const lgk::FeatureMap image =
      lgk::render_ground_pattern(bench_pattern, bench_rig(), kDims);
  return image;
}

std::vector<lgk::WarpedFrame> bench_frames() {
  const lgk::BevGrid grid;
  const lgk::CameraRig ref = bench_rig();
  std::vector<lgk::WarpedFrame> frames;
  for (const double dz : {-10.0, 0.0, 10.0}) {
    lgk::CameraRig frame = ref;
    frame.ego_pose.translation = Eigen::Vector3d(0.0, 0.0, dz);
    frames.push_back(lgk::warp_frame(bench_image(), frame, ref, grid));
  }
  return frames;
}

void BM_WarpFrame(benchmark::State& state, lgk::Exec exec) {
  const lgk::BevGrid grid;
  const lgk::CameraRig ref = bench_rig();
  lgk::CameraRig frame = ref;
  frame.ego_pose.translation = Eigen::Vector3d(0.0, 0.0, -10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lgk::warp_frame(bench_image(), frame, ref, grid, 0.0, exec));
  }
  state.SetItemsProcessed(state.iterations() * grid.fov_rows() *
                          grid.fov_cols());
}

void BM_Aggregate(benchmark::State& state, lgk::AggOp op, lgk::Exec exec) {
  const std::vector<lgk::WarpedFrame> frames = bench_frames();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgk::aggregate(frames, op, {}, exec));
  }
  state.SetItemsProcessed(state.iterations() * frames[0].features.height() *
                          frames[0].features.width());
}

void BM_RenderPattern(benchmark::State& state, lgk::Exec exec) {
  const lgk::CameraRig rig = bench_rig();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lgk::render_ground_pattern(bench_pattern, rig, kDims, exec));
  }
  state.SetItemsProcessed(state.iterations() * kDims.height * kDims.width);
}

BENCHMARK_CAPTURE(BM_WarpFrame, serial, lgk::Exec::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_WarpFrame, openmp, lgk::Exec::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Aggregate, max_serial, lgk::AggOp::Max,
                  lgk::Exec::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Aggregate, max_openmp, lgk::AggOp::Max,
                  lgk::Exec::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Aggregate, mean_serial, lgk::AggOp::Mean,
                  lgk::Exec::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Aggregate, mean_openmp, lgk::AggOp::Mean,
                  lgk::Exec::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RenderPattern, serial, lgk::Exec::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RenderPattern, openmp, lgk::Exec::Parallel)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

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

#include "lgk/temporal_agg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lgk/rng.hpp"

namespace lgk {

namespace {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 4) {
    double sum = 0.0;
    for (const double v : values) {
      sum += v;
    }
    return sum;
  }
  const size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace

AggregatedBev aggregate(std::span<const WarpedFrame> frames, AggOp op,
                        const CellTransform& pre_transform, Exec exec) {
  if (frames.empty()) {
    throw std::invalid_argument("aggregate: no frames");
  }
  const int rows = frames[0].features.height();
  const int cols = frames[0].features.width();
  const int channels = frames[0].features.channels();
  for (const WarpedFrame& frame : frames) {
    if (frame.features.height() != rows || frame.features.width() != cols ||
        frame.features.channels() != channels ||
        frame.mask.height() != rows || frame.mask.width() != cols) {
      throw std::invalid_argument("aggregate: frame shape mismatch");
    }
  }

  AggregatedBev out;
  out.features = FeatureMap(rows, cols, channels);
  out.coverage = BinaryMask(rows, cols);
  out.frame_count = static_cast<int>(frames.size());

  for_each_index(rows, exec, [&](int row) {
    // Valid frames' (possibly transformed) cell vectors, staged in frame
    // order before the reduction.
    std::vector<float> staged(frames.size() * channels);
    std::vector<double> column(frames.size());
    for (int col = 0; col < cols; ++col) {
      int valid = 0;
      for (const WarpedFrame& frame : frames) {
        if (!frame.mask.at(row, col)) {
          continue;
        }
        const auto src = frame.features.cell(row, col);
        const std::span<float> slot{
            staged.data() + static_cast<size_t>(valid) * channels,
            static_cast<size_t>(channels)};
        std::copy(src.begin(), src.end(), slot.begin());
        if (pre_transform) {
          pre_transform(slot);
        }
        ++valid;
      }
      if (valid == 0) {
        continue;
      }
      auto dst = out.features.cell(row, col);
      for (int ch = 0; ch < channels; ++ch) {
        if (op == AggOp::Max) {
          float best = staged[ch];
          for (int k = 1; k < valid; ++k) {
            best = std::max(best,
                            staged[static_cast<size_t>(k) * channels + ch]);
          }
          dst[ch] = best;
        } else {
          for (int k = 0; k < valid; ++k) {
            column[k] = staged[static_cast<size_t>(k) * channels + ch];
          }
          dst[ch] = static_cast<float>(
              pairwise_sum({column.data(), static_cast<size_t>(valid)}) /
              valid);
        }
      }
      out.coverage.set(row, col, 1);
    }
  });
  return out;
}

CellTransform default_pre_transform(std::optional<std::uint64_t> seed,
                                    int channels) {
  if (!seed.has_value()) {
    return {};
  }
  Rng rng(*seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(channels));
  std::vector<double> weights(static_cast<size_t>(channels) * channels);
  std::vector<double> bias(channels);
  for (double& w : weights) {
    w = rng.normal(scale);
  }
  for (double& b : bias) {
    b = rng.normal(0.1);
  }
  return [weights = std::move(weights), bias = std::move(bias),
          channels](std::span<float> cell) {
    std::vector<double> pre(channels);
    for (int i = 0; i < channels; ++i) {
      double acc = bias[i];
      for (int j = 0; j < channels; ++j) {
        acc += weights[static_cast<size_t>(i) * channels + j] * cell[j];
      }
      pre[i] = std::max(acc, 0.0);
    }
    for (int i = 0; i < channels; ++i) {
      cell[i] = static_cast<float>(cell[i] + pre[i]);
    }
  };
}

}  // namespace lgk

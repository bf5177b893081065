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

#include "lgk/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lgk {

FeatureMap::FeatureMap(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 0 || width < 0 || channels < 0) {
    throw std::invalid_argument("FeatureMap: negative dimension");
  }
  data_.assign(static_cast<size_t>(height) * width * channels, fill);
}

FeatureMap::FeatureMap(int height, int width, int channels,
                       std::vector<float> data)
    : height_(height), width_(width), channels_(channels),
      data_(std::move(data)) {
  if (height < 0 || width < 0 || channels < 0) {
    throw std::invalid_argument("FeatureMap: negative dimension");
  }
  if (data_.size() != static_cast<size_t>(height) * width * channels) {
    throw std::invalid_argument("FeatureMap: data length does not match "
                                "height*width*channels");
  }
  for (const float value : data_) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument("FeatureMap: non-finite value");
    }
  }
}

BinaryMask::BinaryMask(int height, int width, std::uint8_t fill)
    : height_(height), width_(width) {
  if (height < 0 || width < 0) {
    throw std::invalid_argument("BinaryMask: negative dimension");
  }
  if (fill > 1) {
    throw std::invalid_argument("BinaryMask: fill must be 0 or 1");
  }
  data_.assign(static_cast<size_t>(height) * width, fill);
}

void BinaryMask::set(int row, int col, std::uint8_t value) {
  if (value > 1) {
    throw std::invalid_argument("BinaryMask: value must be 0 or 1");
  }
  data_[static_cast<size_t>(row) * width_ + col] = value;
}

std::int64_t BinaryMask::count() const {
  return std::accumulate(data_.begin(), data_.end(), std::int64_t{0});
}

bool sample_in_bounds(int height, int width, double u, double v) {
  return u >= 0.0 && v >= 0.0 && u <= static_cast<double>(width - 1) &&
         v <= static_cast<double>(height - 1);
}

bool bilinear_sample_into(const FeatureMap& map, double u, double v,
                          std::span<float> out) {
  if (map.empty()) {
    throw std::invalid_argument("bilinear_sample: empty map");
  }
  if (!sample_in_bounds(map.height(), map.width(), u, v)) {
    std::fill(out.begin(), out.end(), 0.0f);
    return false;
  }
  int col0 = static_cast<int>(std::floor(u));
  int row0 = static_cast<int>(std::floor(v));
  // Samples exactly on the far edge fold into the last full cell.
  col0 = std::min(col0, map.width() - 2);
  row0 = std::min(row0, map.height() - 2);
  col0 = std::max(col0, 0);
  row0 = std::max(row0, 0);
  const int col1 = std::min(col0 + 1, map.width() - 1);
  const int row1 = std::min(row0 + 1, map.height() - 1);
  const double fu = u - col0;
  const double fv = v - row0;

  const auto c00 = map.cell(row0, col0);
  const auto c01 = map.cell(row0, col1);
  const auto c10 = map.cell(row1, col0);
  const auto c11 = map.cell(row1, col1);
  const double w00 = (1.0 - fu) * (1.0 - fv);
  const double w01 = fu * (1.0 - fv);
  const double w10 = (1.0 - fu) * fv;
  const double w11 = fu * fv;
  for (int ch = 0; ch < map.channels(); ++ch) {
    out[ch] = static_cast<float>(w00 * c00[ch] + w01 * c01[ch] +
                                 w10 * c10[ch] + w11 * c11[ch]);
  }
  return true;
}

SampleResult bilinear_sample(const FeatureMap& map, double u, double v) {
  SampleResult result;
  result.values.resize(map.channels());
  result.in_bounds = bilinear_sample_into(map, u, v, result.values);
  return result;
}

FeatureMap map_cells(const FeatureMap& map, const CellTransform& f) {
  FeatureMap out = map;
  if (!f) {
    return out;
  }
  for (int row = 0; row < out.height(); ++row) {
    for (int col = 0; col < out.width(); ++col) {
      f(out.cell(row, col));
    }
  }
  return out;
}

}  // namespace lgk

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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lgk {

/// Dense H x W x F grid of scalar features, row-major with channel-last
/// layout so the feature vector of one cell is contiguous.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int height, int width, int channels, float fill = 0.0f);

  /// Takes ownership of `data` (size must be height*width*channels, all
  /// values finite).
  FeatureMap(int height, int width, int channels, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  float& at(int row, int col, int channel) {
    return data_[index(row, col, channel)];
  }
  float at(int row, int col, int channel) const {
    return data_[index(row, col, channel)];
  }

  std::span<float> cell(int row, int col) {
    return {data_.data() + index(row, col, 0), static_cast<size_t>(channels_)};
  }
  std::span<const float> cell(int row, int col) const {
    return {data_.data() + index(row, col, 0), static_cast<size_t>(channels_)};
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  bool operator==(const FeatureMap&) const = default;

 private:
  size_t index(int row, int col, int channel) const {
    return (static_cast<size_t>(row) * width_ + col) * channels_ + channel;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// H x W grid of {0,1} cells.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, std::uint8_t fill = 0);

  int height() const { return height_; }
  int width() const { return width_; }

  std::uint8_t at(int row, int col) const {
    return data_[static_cast<size_t>(row) * width_ + col];
  }
  void set(int row, int col, std::uint8_t value);

  /// Number of cells set to 1.
  std::int64_t count() const;

  const std::vector<std::uint8_t>& data() const { return data_; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

/// In-place transform of one cell's feature vector. An empty function is
/// treated as the identity everywhere it is accepted.
using CellTransform = std::function<void(std::span<float>)>;

/// True when (u, v) lies inside the sampling domain [0, W-1] x [0, H-1].
bool sample_in_bounds(int height, int width, double u, double v);

/// Bilinear blend of the four cells around (u = column, v = row), written to
/// `out` (size = channels). Returns false and zero-fills `out` when (u, v)
/// is outside the sampling domain.
bool bilinear_sample_into(const FeatureMap& map, double u, double v,
                          std::span<float> out);

struct SampleResult {
  std::vector<float> values;
  bool in_bounds = false;
};

SampleResult bilinear_sample(const FeatureMap& map, double u, double v);

/// Applies f to every cell's feature vector; returns a map of the same shape.
FeatureMap map_cells(const FeatureMap& map, const CellTransform& f);

}  // namespace lgk

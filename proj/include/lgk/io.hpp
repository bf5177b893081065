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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgk/camera.hpp"
#include "lgk/lane_graph.hpp"
#include "lgk/postmerge.hpp"
#include "lgk/synthetic.hpp"
#include "lgk/tensor.hpp"

namespace lgk::io {

/// Any malformed input: bad magic, bad version, truncation, schema or
/// validation failure. `where` is a byte offset ("byte 12") for the binary
/// format and a JSON path ("cam_from_ego.rotation") for the JSON formats.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string where)
      : std::runtime_error(message + " (at " + where + ")"),
        where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Filesystem failure (missing file, failed write), as opposed to
/// malformed content.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The axis convention tag every JSON document must carry.
inline constexpr const char* kAxisConvention = "x-right, z-forward, y-down";

/// N-dimensional float tensor as stored in the binary format: magic
/// "LGKT", u32 version (1), u32 ndim, u32 dims[ndim], then float32
/// payload, everything little-endian and row-major with channels last.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

std::vector<std::uint8_t> serialize_tensor(const Tensor& tensor);
Tensor parse_tensor(std::span<const std::uint8_t> bytes);

Tensor to_tensor(const FeatureMap& map);
FeatureMap to_feature_map(const Tensor& tensor);

std::string graph_to_json(const LaneGraph& graph);
LaneGraph parse_graph(const std::string& json_text);

std::string rig_to_json(const CameraRig& rig);
CameraRig parse_rig(const std::string& json_text);

std::string estimate_to_json(const FrameEstimate& estimate);
FrameEstimate parse_estimate(const std::string& json_text);

std::string scene_to_json(const SyntheticScene& scene);
SyntheticScene parse_scene(const std::string& json_text);

/// Atomic file write: temp file in the same directory, then rename.
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

void write_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const LaneGraph& graph);
LaneGraph read_graph(const std::filesystem::path& path);
void write_rig(const std::filesystem::path& path, const CameraRig& rig);
CameraRig read_rig(const std::filesystem::path& path);
void write_estimate(const std::filesystem::path& path,
                    const FrameEstimate& estimate);
FrameEstimate read_estimate(const std::filesystem::path& path);
void write_scene(const std::filesystem::path& path,
                 const SyntheticScene& scene);
SyntheticScene read_scene(const std::filesystem::path& path);

}  // namespace lgk::io

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

#include "lgk/io.hpp"

#include <atomic>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace lgk::io {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'L', 'G', 'K', 'T'};
constexpr std::uint32_t kTensorVersion = 1;
constexpr std::uint32_t kMaxNdim = 8;
constexpr int kJsonVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value & 0xff));
  out.push_back(static_cast<std::uint8_t>((value >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((value >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((value >> 24) & 0xff));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, size_t offset) {
  if (offset + 4 > bytes.size()) {
    throw ParseError("truncated input, expected 4 more bytes",
                     "byte " + std::to_string(offset));
  }
  return static_cast<std::uint32_t>(bytes[offset]) |
         static_cast<std::uint32_t>(bytes[offset + 1]) << 8 |
         static_cast<std::uint32_t>(bytes[offset + 2]) << 16 |
         static_cast<std::uint32_t>(bytes[offset + 3]) << 24;
}

// ---- JSON helpers --------------------------------------------------------

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) {
    throw ParseError("expected an object", path.empty() ? "$" : path);
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError("missing field", join_path(path, key));
  }
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) {
    throw ParseError("expected a number", path);
  }
  return j.get<double>();
}

double finite_number(const json& j, const std::string& path) {
  const double value = as_number(j, path);
  if (!std::isfinite(value)) {
    throw ParseError("non-finite number", path);
  }
  return value;
}

const json& as_array(const json& j, const std::string& path,
                     int expected_size = -1) {
  if (!j.is_array()) {
    throw ParseError("expected an array", path);
  }
  if (expected_size >= 0 &&
      j.size() != static_cast<size_t>(expected_size)) {
    throw ParseError("expected " + std::to_string(expected_size) +
                         " elements, found " + std::to_string(j.size()),
                     path);
  }
  return j;
}

void check_header(const json& j, const std::string& what) {
  const json& version = field(j, "version", "");
  if (!version.is_number_integer() || version.get<int>() != kJsonVersion) {
    throw ParseError("unsupported " + what + " version", "version");
  }
  const json& axes = field(j, "axis_convention", "");
  if (!axes.is_string() || axes.get<std::string>() != kAxisConvention) {
    throw ParseError(std::string("axis convention must be \"") +
                         kAxisConvention + "\"",
                     "axis_convention");
  }
}

PlanarPoint parse_planar(const json& j, const std::string& path) {
  const json& arr = as_array(j, path, 2);
  return {finite_number(arr[0], path + "[0]"),
          finite_number(arr[1], path + "[1]")};
}

json planar_to_json(const PlanarPoint& p) {
  return json::array({p.x(), p.y()});
}

json transform_to_json(const RigidTransform& t) {
  json rotation = json::array();
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      rotation.push_back(t.rotation(row, col));
    }
  }
  return json{{"rotation", rotation},
              {"translation", json::array({t.translation.x(),
                                           t.translation.y(),
                                           t.translation.z()})}};
}

RigidTransform parse_transform(const json& j, const std::string& path) {
  RigidTransform t;
  const json& rotation = as_array(field(j, "rotation", path),
                                  join_path(path, "rotation"), 9);
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      t.rotation(row, col) = finite_number(
          rotation[row * 3 + col],
          join_path(path, "rotation[" + std::to_string(row * 3 + col) + "]"));
    }
  }
  const json& translation = as_array(field(j, "translation", path),
                                     join_path(path, "translation"), 3);
  for (int i = 0; i < 3; ++i) {
    t.translation(i) = finite_number(
        translation[i],
        join_path(path, "translation[" + std::to_string(i) + "]"));
  }
  if (t.orthonormality_error() > 1e-6) {
    throw ParseError("rotation is not orthonormal with determinant +1",
                     join_path(path, "rotation"));
  }
  return t;
}

json intrinsics_to_json(const CameraIntrinsics& intrinsics) {
  return json{{"fx", intrinsics.fx},
              {"fy", intrinsics.fy},
              {"cx", intrinsics.cx},
              {"cy", intrinsics.cy}};
}

CameraIntrinsics parse_intrinsics(const json& j, const std::string& path) {
  CameraIntrinsics intrinsics;
  intrinsics.fx = finite_number(field(j, "fx", path), join_path(path, "fx"));
  intrinsics.fy = finite_number(field(j, "fy", path), join_path(path, "fy"));
  intrinsics.cx = finite_number(field(j, "cx", path), join_path(path, "cx"));
  intrinsics.cy = finite_number(field(j, "cy", path), join_path(path, "cy"));
  if (intrinsics.fx <= 0.0 || intrinsics.fy <= 0.0) {
    throw ParseError("focal lengths must be positive", join_path(path, "fx"));
  }
  return intrinsics;
}

json graph_to_json_value(const LaneGraph& graph) {
  json lines = json::array();
  for (const BezierCenterline& line : graph.centerlines) {
    lines.push_back(json::array({planar_to_json(line.control_points[0]),
                                 planar_to_json(line.control_points[1]),
                                 planar_to_json(line.control_points[2])}));
  }
  json edges = json::array();
  for (const auto& [from, to] : graph.incidence.edges()) {
    edges.push_back(json::array({from, to}));
  }
  return json{{"control_points", lines}, {"edges", edges}};
}

LaneGraph parse_graph_value(const json& j, const std::string& path) {
  LaneGraph graph;
  const json& lines = as_array(field(j, "control_points", path),
                               join_path(path, "control_points"));
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string line_path =
        join_path(path, "control_points[" + std::to_string(i) + "]");
    const json& cps = as_array(lines[i], line_path, 3);
    BezierCenterline line;
    for (int k = 0; k < 3; ++k) {
      line.control_points[k] =
          parse_planar(cps[k], line_path + "[" + std::to_string(k) + "]");
    }
    graph.centerlines.push_back(line);
  }
  const int count = static_cast<int>(graph.centerlines.size());
  graph.incidence = IncidenceMatrix(count);
  const json& edges =
      as_array(field(j, "edges", path), join_path(path, "edges"));
  for (size_t e = 0; e < edges.size(); ++e) {
    const std::string edge_path =
        join_path(path, "edges[" + std::to_string(e) + "]");
    const json& edge = as_array(edges[e], edge_path, 2);
    if (!edge[0].is_number_integer() || !edge[1].is_number_integer()) {
      throw ParseError("edge endpoints must be integers", edge_path);
    }
    const int from = edge[0].get<int>();
    const int to = edge[1].get<int>();
    if (from < 0 || from >= count || to < 0 || to >= count) {
      throw ParseError("edge endpoint out of range", edge_path);
    }
    if (from == to) {
      throw ParseError("self-loop edge", edge_path);
    }
    graph.incidence.set(from, to, true);
  }
  return graph;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(err.what(), "byte " + std::to_string(err.byte));
  }
}

}  // namespace

// ---- tensor binary format ------------------------------------------------

std::vector<std::uint8_t> serialize_tensor(const Tensor& tensor) {
  std::uint64_t expected = 1;
  for (const std::uint32_t dim : tensor.dims) {
    expected *= dim;
  }
  if (tensor.dims.empty() || tensor.dims.size() > kMaxNdim ||
      expected != tensor.data.size()) {
    throw std::invalid_argument(
        "serialize_tensor: dims do not match payload");
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + tensor.dims.size() * 4 + tensor.data.size() * 4);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kTensorVersion);
  put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (const std::uint32_t dim : tensor.dims) {
    put_u32(out, dim);
  }
  for (const float value : tensor.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, 4);
    put_u32(out, bits);
  }
  return out;
}

Tensor parse_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("bad magic, expected \"LGKT\"", "byte 0");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kTensorVersion) {
    throw ParseError("unsupported tensor version " + std::to_string(version),
                     "byte 4");
  }
  const std::uint32_t ndim = get_u32(bytes, 8);
  if (ndim == 0 || ndim > kMaxNdim) {
    throw ParseError("ndim must be in [1, 8], found " + std::to_string(ndim),
                     "byte 8");
  }
  Tensor tensor;
  std::uint64_t count = 1;
  const std::uint64_t payload_floats = bytes.size() / 4;  // upper bound
  for (std::uint32_t d = 0; d < ndim; ++d) {
    const size_t offset = 12 + 4 * static_cast<size_t>(d);
    const std::uint32_t dim = get_u32(bytes, offset);
    if (dim == 0) {
      throw ParseError("zero dimension", "byte " + std::to_string(offset));
    }
    count *= dim;
    if (count > payload_floats) {
      throw ParseError("dims imply more data than present",
                       "byte " + std::to_string(offset));
    }
    tensor.dims.push_back(dim);
  }
  const size_t header = 12 + 4 * static_cast<size_t>(ndim);
  const size_t expected_bytes = count * 4;
  if (bytes.size() - header != expected_bytes) {
    throw ParseError("payload length mismatch: expected " +
                         std::to_string(expected_bytes) + " bytes, found " +
                         std::to_string(bytes.size() - header),
                     "byte " + std::to_string(header));
  }
  tensor.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t bits = get_u32(bytes, header + 4 * i);
    float value;
    std::memcpy(&value, &bits, 4);
    tensor.data[i] = value;
  }
  return tensor;
}

Tensor to_tensor(const FeatureMap& map) {
  Tensor tensor;
  tensor.dims = {static_cast<std::uint32_t>(map.height()),
                 static_cast<std::uint32_t>(map.width()),
                 static_cast<std::uint32_t>(map.channels())};
  tensor.data = map.data();
  return tensor;
}

FeatureMap to_feature_map(const Tensor& tensor) {
  if (tensor.dims.size() != 3) {
    throw ParseError("expected a rank-3 (height, width, channels) tensor",
                     "byte 8");
  }
  return FeatureMap(static_cast<int>(tensor.dims[0]),
                    static_cast<int>(tensor.dims[1]),
                    static_cast<int>(tensor.dims[2]), tensor.data);
}

// ---- JSON formats ---------------------------------------------------------

std::string graph_to_json(const LaneGraph& graph) {
  json j = graph_to_json_value(graph);
  j["version"] = kJsonVersion;
  j["axis_convention"] = kAxisConvention;
  return j.dump(2) + "\n";
}

LaneGraph parse_graph(const std::string& json_text) {
  const json j = parse_document(json_text);
  check_header(j, "graph");
  return parse_graph_value(j, "");
}

std::string rig_to_json(const CameraRig& rig) {
  json j = intrinsics_to_json(rig.intrinsics);
  j["version"] = kJsonVersion;
  j["axis_convention"] = kAxisConvention;
  j["cam_from_ego"] = transform_to_json(rig.cam_from_ego);
  j["ego_pose"] = transform_to_json(rig.ego_pose);
  j["camera_height"] = rig.camera_height;
  return j.dump(2) + "\n";
}

CameraRig parse_rig(const std::string& json_text) {
  const json j = parse_document(json_text);
  check_header(j, "rig");
  CameraRig rig;
  rig.intrinsics = parse_intrinsics(j, "");
  rig.cam_from_ego = parse_transform(field(j, "cam_from_ego", ""),
                                     "cam_from_ego");
  rig.ego_pose = parse_transform(field(j, "ego_pose", ""), "ego_pose");
  rig.camera_height =
      finite_number(field(j, "camera_height", ""), "camera_height");
  if (rig.camera_height <= 0.0) {
    throw ParseError("camera_height must be positive", "camera_height");
  }
  return rig;
}

std::string estimate_to_json(const FrameEstimate& estimate) {
  estimate.ensure_consistent();
  json r = json::array();
  json omega = json::array();
  for (int i = 0; i < estimate.count(); ++i) {
    const BezierCenterline& line = estimate.control_points[i];
    r.push_back(json::array({planar_to_json(line.control_points[0]),
                             planar_to_json(line.control_points[1]),
                             planar_to_json(line.control_points[2])}));
    json points = json::array();
    for (const PlanarPoint& p : estimate.polylines[i].points) {
      points.push_back(planar_to_json(p));
    }
    omega.push_back(std::move(points));
  }
  json c = json::array();
  for (int i = 0; i < estimate.count(); ++i) {
    json row = json::array();
    for (int k = 0; k < estimate.count(); ++k) {
      row.push_back(estimate.conn(i, k));
    }
    c.push_back(std::move(row));
  }
  json j{{"version", kJsonVersion},
         {"axis_convention", kAxisConvention},
         {"relative_time", estimate.relative_time},
         {"R", r},
         {"P", estimate.probabilities},
         {"C", c},
         {"omega", omega}};
  return j.dump(2) + "\n";
}

FrameEstimate parse_estimate(const std::string& json_text) {
  const json j = parse_document(json_text);
  check_header(j, "estimate");
  FrameEstimate estimate;
  estimate.relative_time =
      finite_number(field(j, "relative_time", ""), "relative_time");

  const json& r = as_array(field(j, "R", ""), "R");
  const int q = static_cast<int>(r.size());
  for (int i = 0; i < q; ++i) {
    const std::string path = "R[" + std::to_string(i) + "]";
    const json& cps = as_array(r[i], path, 3);
    BezierCenterline line;
    for (int k = 0; k < 3; ++k) {
      line.control_points[k] =
          parse_planar(cps[k], path + "[" + std::to_string(k) + "]");
    }
    estimate.control_points.push_back(line);
  }

  const json& p = as_array(field(j, "P", ""), "P", q);
  for (int i = 0; i < q; ++i) {
    const std::string path = "P[" + std::to_string(i) + "]";
    const double prob = finite_number(p[i], path);
    if (prob < 0.0 || prob > 1.0) {
      throw ParseError("probability outside [0, 1]", path);
    }
    estimate.probabilities.push_back(prob);
  }

  const json& c = as_array(field(j, "C", ""), "C", q);
  estimate.connectivity.reserve(static_cast<size_t>(q) * q);
  for (int i = 0; i < q; ++i) {
    const std::string row_path = "C[" + std::to_string(i) + "]";
    const json& row = as_array(c[i], row_path, q);
    for (int k = 0; k < q; ++k) {
      const std::string path = row_path + "[" + std::to_string(k) + "]";
      const double score = finite_number(row[k], path);
      if (score < 0.0 || score > 1.0) {
        throw ParseError("connectivity outside [0, 1]", path);
      }
      estimate.connectivity.push_back(score);
    }
  }

  const json& omega = as_array(field(j, "omega", ""), "omega", q);
  int omega_points = -1;
  for (int i = 0; i < q; ++i) {
    const std::string line_path = "omega[" + std::to_string(i) + "]";
    const json& points = as_array(omega[i], line_path, omega_points);
    if (omega_points < 0) {
      if (points.size() < 2) {
        throw ParseError("polyline needs at least 2 points", line_path);
      }
      omega_points = static_cast<int>(points.size());
    }
    Polyline line;
    for (int k = 0; k < omega_points; ++k) {
      line.points.push_back(
          parse_planar(points[k], line_path + "[" + std::to_string(k) + "]"));
    }
    estimate.polylines.push_back(std::move(line));
  }
  estimate.ensure_consistent();
  return estimate;
}

std::string scene_to_json(const SyntheticScene& scene) {
  json trajectory = json::array();
  for (const TimedPose& timed : scene.ego_trajectory) {
    trajectory.push_back(json{{"timestamp", timed.timestamp},
                              {"pose", transform_to_json(timed.pose)}});
  }
  json rig = intrinsics_to_json(scene.rig_template.intrinsics);
  rig["cam_from_ego"] = transform_to_json(scene.rig_template.cam_from_ego);
  rig["camera_height"] = scene.rig_template.camera_height;
  json j{{"version", kJsonVersion},
         {"axis_convention", kAxisConvention},
         {"trajectory", trajectory},
         {"rig_template", rig},
         {"graph", graph_to_json_value(scene.gt_graph)}};
  return j.dump(2) + "\n";
}

SyntheticScene parse_scene(const std::string& json_text) {
  const json j = parse_document(json_text);
  check_header(j, "scene");
  SyntheticScene scene;

  const json& trajectory =
      as_array(field(j, "trajectory", ""), "trajectory");
  double previous = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < trajectory.size(); ++k) {
    const std::string path = "trajectory[" + std::to_string(k) + "]";
    TimedPose timed;
    timed.timestamp = finite_number(field(trajectory[k], "timestamp", path),
                                    join_path(path, "timestamp"));
    if (timed.timestamp <= previous) {
      throw ParseError("timestamps must be strictly increasing",
                       join_path(path, "timestamp"));
    }
    previous = timed.timestamp;
    timed.pose = parse_transform(field(trajectory[k], "pose", path),
                                 join_path(path, "pose"));
    scene.ego_trajectory.push_back(timed);
  }

  const json& rig = field(j, "rig_template", "");
  scene.rig_template.intrinsics = parse_intrinsics(rig, "rig_template");
  scene.rig_template.cam_from_ego =
      parse_transform(field(rig, "cam_from_ego", "rig_template"),
                      "rig_template.cam_from_ego");
  scene.rig_template.camera_height =
      finite_number(field(rig, "camera_height", "rig_template"),
                    "rig_template.camera_height");
  if (scene.rig_template.camera_height <= 0.0) {
    throw ParseError("camera_height must be positive",
                     "rig_template.camera_height");
  }

  scene.gt_graph = parse_graph_value(field(j, "graph", ""), "graph");
  return scene;
}

// ---- files -----------------------------------------------------------------

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path temp =
      path.parent_path() /
      (path.filename().string() + ".tmp" +
       std::to_string(counter.fetch_add(1)));
  {
    std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      throw IoError("cannot open " + temp.string() + " for writing");
    }
    stream.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
    if (!stream) {
      throw IoError("write failed for " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + temp.string() + " to " + path.string() +
                  ": " + ec.message());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path,
             std::span<const std::uint8_t>(
                 reinterpret_cast<const std::uint8_t*>(text.data()),
                 text.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary | std::ios::ate);
  if (!stream) {
    throw IoError("cannot open " + path.string());
  }
  const std::streamsize size = stream.tellg();
  stream.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<size_t>(size));
  stream.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!stream) {
    throw IoError("read failed for " + path.string());
  }
  return bytes;
}

std::string read_text_file(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  write_file(path, serialize_tensor(tensor));
}

Tensor read_tensor(const std::filesystem::path& path) {
  return parse_tensor(read_file(path));
}

void write_graph(const std::filesystem::path& path, const LaneGraph& graph) {
  write_file(path, graph_to_json(graph));
}

LaneGraph read_graph(const std::filesystem::path& path) {
  return parse_graph(read_text_file(path));
}

void write_rig(const std::filesystem::path& path, const CameraRig& rig) {
  write_file(path, rig_to_json(rig));
}

CameraRig read_rig(const std::filesystem::path& path) {
  return parse_rig(read_text_file(path));
}

void write_estimate(const std::filesystem::path& path,
                    const FrameEstimate& estimate) {
  write_file(path, estimate_to_json(estimate));
}

FrameEstimate read_estimate(const std::filesystem::path& path) {
  return parse_estimate(read_text_file(path));
}

void write_scene(const std::filesystem::path& path,
                 const SyntheticScene& scene) {
  write_file(path, scene_to_json(scene));
}

SyntheticScene read_scene(const std::filesystem::path& path) {
  return parse_scene(read_text_file(path));
}

}  // namespace lgk::io

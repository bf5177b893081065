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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lgk/io.hpp"
#include "lgk/metrics.hpp"
#include "lgk/postmerge.hpp"
#include "lgk/stetr.hpp"
#include "lgk/svg.hpp"
#include "lgk/synthetic.hpp"
#include "lgk/temporal_agg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GridFlags {
  lgk::BevGrid grid;

  void attach(CLI::App* cmd) {
    cmd->add_option("--x-min", grid.x_min, "Left edge of the target, m");
    cmd->add_option("--x-max", grid.x_max, "Right edge of the target, m");
    cmd->add_option("--z-min", grid.z_min, "Near edge of the target, m");
    cmd->add_option("--z-max", grid.z_max, "Far edge of the target, m");
    cmd->add_option("--resolution", grid.resolution, "Cell size, m");
    cmd->add_option("--fov-margin", grid.fov_margin,
                    "Extra FOV margin per side, m");
  }
};

json grid_to_json(const lgk::BevGrid& grid) {
  return json{{"x_min", grid.x_min},         {"x_max", grid.x_max},
              {"z_min", grid.z_min},         {"z_max", grid.z_max},
              {"resolution", grid.resolution},
              {"fov_margin", grid.fov_margin}};
}

lgk::BevGrid grid_from_json(const json& j) {
  lgk::BevGrid grid;
  grid.x_min = j.at("x_min").get<double>();
  grid.x_max = j.at("x_max").get<double>();
  grid.z_min = j.at("z_min").get<double>();
  grid.z_max = j.at("z_max").get<double>();
  grid.resolution = j.at("resolution").get<double>();
  grid.fov_margin = j.at("fov_margin").get<double>();
  return grid;
}

json mask_to_json(const lgk::BinaryMask& mask) {
  json rows = json::array();
  for (int row = 0; row < mask.height(); ++row) {
    std::string bits(mask.width(), '0');
    for (int col = 0; col < mask.width(); ++col) {
      if (mask.at(row, col)) {
        bits[col] = '1';
      }
    }
    rows.push_back(bits);
  }
  return rows;
}

lgk::BinaryMask mask_from_json(const json& rows) {
  const int height = static_cast<int>(rows.size());
  const int width =
      height == 0 ? 0 : static_cast<int>(rows[0].get<std::string>().size());
  lgk::BinaryMask mask(height, width);
  for (int row = 0; row < height; ++row) {
    const std::string bits = rows[row].get<std::string>();
    if (static_cast<int>(bits.size()) != width) {
      throw lgk::io::ParseError("ragged mask rows",
                                "mask[" + std::to_string(row) + "]");
    }
    for (int col = 0; col < width; ++col) {
      if (bits[col] != '0' && bits[col] != '1') {
        throw lgk::io::ParseError("mask rows must contain only 0 and 1",
                                  "mask[" + std::to_string(row) + "]");
      }
      mask.set(row, col, bits[col] == '1');
    }
  }
  return mask;
}

std::string layout_name(lgk::Layout layout) {
  switch (layout) {
    case lgk::Layout::Straight: return "straight";
    case lgk::Layout::Merge: return "merge";
    case lgk::Layout::Intersection: return "intersection";
  }
  return "straight";
}

int run_synth(std::uint64_t seed, const std::string& layout_str, int lanes,
              int frames, double dt, const lgk::NoiseParams& noise,
              const fs::path& out_dir) {
  lgk::Layout layout;
  if (layout_str == "straight") {
    layout = lgk::Layout::Straight;
  } else if (layout_str == "merge") {
    layout = lgk::Layout::Merge;
  } else if (layout_str == "intersection") {
    layout = lgk::Layout::Intersection;
  } else {
    std::cerr << "--layout must be straight, merge, or intersection\n";
    return 1;
  }
  const double steps_per_frame = dt / lgk::kTrajectoryStepSeconds;
  if (std::abs(steps_per_frame - std::round(steps_per_frame)) > 1e-9) {
    std::cerr << "--dt must be a multiple of " << lgk::kTrajectoryStepSeconds
              << " s\n";
    return 1;
  }

  const lgk::SyntheticScene scene = lgk::generate_scene(seed, layout, lanes);
  const int stride = static_cast<int>(std::round(steps_per_frame));
  const int trajectory_size = static_cast<int>(scene.ego_trajectory.size());
  const int mid_frame = frames / 2;
  const int ref_traj_index = trajectory_size / 2;
  std::vector<int> indices;
  for (int k = 0; k < frames; ++k) {
    const int index = ref_traj_index + (k - mid_frame) * stride;
    if (index < 0 || index >= trajectory_size) {
      std::cerr << "--frames/--dt walk outside the scene trajectory\n";
      return 1;
    }
    indices.push_back(index);
  }

  const std::vector<lgk::FrameEstimate> estimates =
      lgk::simulate_frame_estimates(scene, indices, noise, seed);

  fs::create_directories(out_dir);
  lgk::io::write_scene(out_dir / "scene.json", scene);

  const lgk::RigidTransform ref_pose =
      scene.ego_trajectory[indices[mid_frame]].pose;
  const lgk::Window window;
  std::vector<std::string> estimate_files;
  std::vector<std::string> estimate_ref_files;
  for (int k = 0; k < frames; ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "est_%03d.json", k);
    lgk::io::write_estimate(out_dir / name, estimates[k]);
    estimate_files.emplace_back(name);

    const lgk::RigidTransform ref_from_frame_t =
        ref_pose.inverse() * scene.ego_trajectory[indices[k]].pose;
    std::snprintf(name, sizeof(name), "est_ref_%03d.json", k);
    lgk::io::write_estimate(
        out_dir / name, lgk::estimate_in_frame(estimates[k],
                                               ref_from_frame_t));
    estimate_ref_files.emplace_back(name);
  }

  const lgk::LaneGraph gt_ref =
      lgk::transform_graph(scene.gt_graph, ref_pose.inverse());
  lgk::io::write_graph(out_dir / "gt_ref_window.json",
                       lgk::clip_graph_to_window(gt_ref, window));
  const auto in_any_frame_window = [&](const lgk::PlanarPoint& p) {
    for (const int index : indices) {
      const lgk::RigidTransform frame_from_ref =
          scene.ego_trajectory[index].pose.inverse() * ref_pose;
      if (window.contains(lgk::apply_planar(frame_from_ref, p))) {
        return true;
      }
    }
    return false;
  };
  lgk::io::write_graph(out_dir / "gt_ref_union.json",
                       lgk::clip_graph(gt_ref, in_any_frame_window));

  json manifest{{"version", 1},
                {"seed", seed},
                {"layout", layout_name(layout)},
                {"lanes", lanes},
                {"frames", frames},
                {"dt", dt},
                {"noise",
                 {{"control_point_sigma", noise.control_point_sigma},
                  {"fragment_probability", noise.fragment_probability},
                  {"dropout_probability", noise.dropout_probability},
                  {"false_positive_rate", noise.false_positive_rate},
                  {"prob_noise_sigma", noise.prob_noise_sigma}}},
                {"reference", mid_frame},
                {"trajectory_indices", indices},
                {"estimates", estimate_files},
                {"estimates_in_reference", estimate_ref_files},
                {"gt_reference_window", "gt_ref_window.json"},
                {"gt_reference_union", "gt_ref_union.json"},
                {"scene", "scene.json"}};
  lgk::io::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << out_dir.string() << ": " << frames
            << " frame estimates written (reference " << mid_frame << ")\n";
  return 0;
}

int run_warp(const fs::path& image_path, const fs::path& rig_path,
             const fs::path& ref_rig_path, double relative_time,
             const lgk::BevGrid& grid, const fs::path& out_prefix) {
  grid.ensure_valid();
  const lgk::FeatureMap image =
      lgk::io::to_feature_map(lgk::io::read_tensor(image_path));
  const lgk::CameraRig rig = lgk::io::read_rig(rig_path);
  const lgk::CameraRig ref_rig =
      ref_rig_path.empty() ? rig : lgk::io::read_rig(ref_rig_path);

  const lgk::WarpedFrame warped =
      lgk::warp_frame(image, rig, ref_rig, grid, relative_time);
  lgk::io::write_tensor(fs::path(out_prefix.string() + ".lgt"),
                        lgk::io::to_tensor(warped.features));
  json sidecar{{"version", 1},
               {"relative_time", warped.relative_time},
               {"grid", grid_to_json(grid)},
               {"mask", mask_to_json(warped.mask)}};
  lgk::io::write_file(fs::path(out_prefix.string() + ".json"),
                      sidecar.dump(2) + "\n");
  std::cout << out_prefix.string() << ": warped " << warped.mask.count()
            << " valid cells of " << grid.fov_rows() << "x" << grid.fov_cols()
            << "\n";
  return 0;
}

lgk::WarpedFrame load_warped(const fs::path& prefix, lgk::BevGrid* grid) {
  lgk::WarpedFrame frame;
  frame.features = lgk::io::to_feature_map(
      lgk::io::read_tensor(fs::path(prefix.string() + ".lgt")));
  const json sidecar = json::parse(
      lgk::io::read_text_file(fs::path(prefix.string() + ".json")));
  frame.relative_time = sidecar.at("relative_time").get<double>();
  frame.mask = mask_from_json(sidecar.at("mask"));
  if (grid != nullptr) {
    *grid = grid_from_json(sidecar.at("grid"));
  }
  if (frame.mask.height() != frame.features.height() ||
      frame.mask.width() != frame.features.width()) {
    throw lgk::io::ParseError("mask and features disagree on shape", "mask");
  }
  return frame;
}

int run_aggregate(const std::vector<std::string>& frame_prefixes,
                  const std::string& op_str,
                  std::optional<std::uint64_t> seed,
                  const fs::path& out_prefix) {
  lgk::AggOp op;
  if (op_str == "max") {
    op = lgk::AggOp::Max;
  } else if (op_str == "mean") {
    op = lgk::AggOp::Mean;
  } else {
    std::cerr << "--op must be max or mean\n";
    return 1;
  }
  std::vector<lgk::WarpedFrame> frames;
  lgk::BevGrid grid;
  for (size_t k = 0; k < frame_prefixes.size(); ++k) {
    lgk::BevGrid frame_grid;
    frames.push_back(load_warped(frame_prefixes[k], &frame_grid));
    if (k == 0) {
      grid = frame_grid;
    } else if (grid_to_json(frame_grid) != grid_to_json(grid)) {
      std::cerr << frame_prefixes[k] << ": grid differs from the first frame\n";
      return 1;
    }
  }
  const lgk::CellTransform pre =
      lgk::default_pre_transform(seed, frames[0].features.channels());
  const lgk::AggregatedBev aggregated = lgk::aggregate(frames, op, pre);

  lgk::io::write_tensor(
      fs::path(out_prefix.string() + ".lgt"),
      lgk::io::to_tensor(lgk::crop_to_target(aggregated.features, grid)));
  json sidecar{{"version", 1},
               {"frame_count", aggregated.frame_count},
               {"grid", grid_to_json(grid)},
               {"coverage",
                mask_to_json(lgk::crop_to_target(aggregated.coverage, grid))}};
  lgk::io::write_file(fs::path(out_prefix.string() + ".json"),
                      sidecar.dump(2) + "\n");
  std::cout << out_prefix.string() << ": aggregated " << frames.size()
            << " frames\n";
  return 0;
}

int run_postmerge(const std::vector<std::string>& estimate_paths,
                  int reference, const lgk::MergeParams& params,
                  double connect_tol, const fs::path& out_path) {
  std::vector<lgk::FrameEstimate> estimates;
  estimates.reserve(estimate_paths.size());
  for (const std::string& path : estimate_paths) {
    estimates.push_back(lgk::io::read_estimate(path));
  }
  if (reference < 0 || reference >= static_cast<int>(estimates.size())) {
    std::cerr << "--ref must index one of the given estimates\n";
    return 1;
  }
  const lgk::LaneGraph merged =
      lgk::post_merge(estimates, reference, params, connect_tol);
  lgk::io::write_graph(out_path, merged);
  std::cout << out_path.string() << ": " << merged.centerlines.size()
            << " centerlines, " << merged.incidence.edge_count()
            << " edges\n";
  return 0;
}

int run_eval(const fs::path& pred_path, const fs::path& gt_path,
             double match_dist, const fs::path& out_path) {
  const lgk::LaneGraph pred = lgk::io::read_graph(pred_path);
  const lgk::LaneGraph gt = lgk::io::read_graph(gt_path);
  const lgk::EvalReport report = lgk::evaluate(pred, gt, match_dist);
  json pairs = json::array();
  for (const auto& [p, g] : report.matched_pairs) {
    pairs.push_back(json::array({p, g}));
  }
  const json j{{"version", 1},
               {"mean_f", report.mean_f},
               {"detect_f", report.detect_f},
               {"connect_f", report.connect_f},
               {"matched_pairs", pairs},
               {"match_dist", match_dist}};
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    lgk::io::write_file(out_path, text);
  }
  return 0;
}

int run_embed(int n, int x, int y, int f,
              const std::vector<double>& offsets, int temporal_dim,
              const fs::path& out_prefix) {
  if (static_cast<int>(offsets.size()) != n) {
    std::cerr << "--offsets must list exactly --n values\n";
    return 1;
  }
  lgk::EmbeddingConfig cfg = lgk::EmbeddingConfig::with_default_split(f);
  if (temporal_dim > 0) {
    cfg.temporal_dim = temporal_dim;
    cfg.spatial_dims = f - temporal_dim;
  }
  cfg.ensure_valid();
  const std::vector<lgk::FeatureMap> frames(n, lgk::FeatureMap(x, y, f));
  const lgk::TokenSequence seq =
      lgk::flatten_with_embeddings(frames, offsets, cfg);

  lgk::io::Tensor tokens;
  tokens.dims = {static_cast<std::uint32_t>(seq.token_count),
                 static_cast<std::uint32_t>(seq.feature_dim)};
  tokens.data = seq.tokens;
  lgk::io::write_tensor(fs::path(out_prefix.string() + ".lgt"), tokens);

  json provenance = json::array();
  for (const lgk::TokenProvenance& p : seq.provenance) {
    provenance.push_back(json::array({p.frame, p.row, p.col}));
  }
  const json sidecar{{"version", 1},
                     {"token_count", seq.token_count},
                     {"feature_dim", seq.feature_dim},
                     {"temporal_dim", cfg.temporal_dim},
                     {"spatial_dims", cfg.spatial_dims},
                     {"offsets", offsets},
                     {"provenance", provenance}};
  lgk::io::write_file(fs::path(out_prefix.string() + ".json"),
                      sidecar.dump(2) + "\n");
  std::cout << out_prefix.string() << ": " << seq.token_count << " tokens\n";
  return 0;
}

int run_render(const std::vector<std::string>& graph_paths,
               const fs::path& out_path) {
  std::vector<lgk::LaneGraph> graphs;
  graphs.reserve(graph_paths.size());
  for (const std::string& path : graph_paths) {
    graphs.push_back(lgk::io::read_graph(path));
  }
  lgk::io::write_file(out_path, lgk::render_svg(graphs));
  std::cout << out_path.string() << ": " << graphs.size() << " graph(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lgkit: BEV lane-graph pipeline tools"};
  app.require_subcommand(1);

  // ---- synth
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic scene bundle with frame estimates");
  std::uint64_t seed = 0;
  std::string layout = "straight";
  int lanes = 2;
  int frames = 3;
  double dt = 2.0;
  lgk::NoiseParams noise;
  std::string synth_out;
  synth->add_option("--seed", seed, "Scene seed");
  synth->add_option("--layout", layout, "straight | merge | intersection");
  synth->add_option("--lanes", lanes, "Number of lanes")->check(
      CLI::PositiveNumber);
  synth->add_option("--frames", frames, "Number of frames")
      ->check(CLI::PositiveNumber);
  synth->add_option("--dt", dt, "Frame spacing, seconds")
      ->check(CLI::PositiveNumber);
  synth->add_option("--noise-sigma", noise.control_point_sigma,
                    "Control point jitter, m");
  synth->add_option("--noise-fragment", noise.fragment_probability,
                    "Fragmentation probability, [0,1]");
  synth->add_option("--noise-dropout", noise.dropout_probability,
                    "Dropout probability, [0,1]");
  synth->add_option("--noise-fp", noise.false_positive_rate,
                    "Expected false positives per frame");
  synth->add_option("--noise-prob", noise.prob_noise_sigma,
                    "Existence probability noise, logit scale");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // ---- warp
  auto* warp = app.add_subcommand(
      "warp", "Warp an image feature tensor onto the reference BEV grid");
  std::string warp_image, warp_rig, warp_ref_rig, warp_out;
  double warp_relative_time = 0.0;
  GridFlags warp_grid;
  warp->add_option("--image", warp_image, "Input feature tensor (.lgt)")
      ->required();
  warp->add_option("--rig", warp_rig, "Frame rig JSON")->required();
  warp->add_option("--ref-rig", warp_ref_rig,
                   "Reference rig JSON (defaults to --rig)");
  warp->add_option("--relative-time", warp_relative_time,
                   "Frame offset vs reference, seconds");
  warp_grid.attach(warp);
  warp->add_option("--out", warp_out,
                   "Output prefix (writes .lgt and .json)")->required();

  // ---- aggregate
  auto* aggregate = app.add_subcommand(
      "aggregate", "Reduce warped frames into one target BEV map");
  std::vector<std::string> agg_frames;
  std::string agg_op = "max";
  std::uint64_t agg_seed = 0;
  bool agg_seed_set = false;
  std::string agg_out;
  aggregate->add_option("--frames", agg_frames,
                        "Warped frame prefixes (from `warp`)")
      ->required()
      ->delimiter(',');
  aggregate->add_option("--op", agg_op, "max | mean");
  aggregate->add_option("--seed", agg_seed,
                        "Pre-transform seed (omit for identity)")
      ->trigger_on_parse()
      ->each([&agg_seed_set](const std::string&) { agg_seed_set = true; });
  aggregate->add_option("--out", agg_out,
                        "Output prefix (writes .lgt and .json)")->required();

  // ---- postmerge
  auto* postmerge = app.add_subcommand(
      "postmerge", "Merge per-frame estimates into the reference lane graph");
  std::vector<std::string> pm_estimates;
  int pm_ref = 0;
  lgk::MergeParams pm_params;
  double pm_connect_tol = lgk::kDefaultConnectTol;
  std::string pm_out;
  postmerge->add_option("--estimates", pm_estimates,
                        "Estimate JSONs, reference-frame coordinates")
      ->required()
      ->delimiter(',');
  postmerge->add_option("--ref", pm_ref, "Reference estimate index");
  postmerge->add_option("--prob-thresh", pm_params.prob_thresh,
                        "Existence probability cutoff, [0,1]");
  postmerge->add_option("--dir-thresh", pm_params.dir_thresh,
                        "Direction dot-product cutoff, [-1,1]");
  postmerge->add_option("--dist-thresh", pm_params.dist_thresh,
                        "Point match radius, m");
  postmerge->add_option("--connect-tol", pm_connect_tol,
                        "Edge endpoint tolerance, m");
  postmerge->add_option("--out", pm_out, "Merged graph JSON")->required();

  // ---- eval
  auto* eval = app.add_subcommand(
      "eval", "Score a predicted lane graph against ground truth");
  std::string eval_pred, eval_gt, eval_out;
  double eval_match_dist = lgk::kDefaultMatchDist;
  eval->add_option("--pred", eval_pred, "Predicted graph JSON")->required();
  eval->add_option("--gt", eval_gt, "Ground-truth graph JSON")->required();
  eval->add_option("--match-dist", eval_match_dist,
                   "Point match distance, m");
  eval->add_option("--out", eval_out, "Also write the report JSON here");

  // ---- embed
  auto* embed = app.add_subcommand(
      "embed", "Emit spatial-temporal token embeddings for an N x X x Y grid");
  int embed_n = 3, embed_x = 4, embed_y = 4, embed_f = 16;
  int embed_temporal = 0;
  std::vector<double> embed_offsets;
  std::string embed_out;
  embed->add_option("--n", embed_n, "Frame count")->check(CLI::PositiveNumber);
  embed->add_option("--x", embed_x, "Rows per frame")
      ->check(CLI::PositiveNumber);
  embed->add_option("--y", embed_y, "Columns per frame")
      ->check(CLI::PositiveNumber);
  embed->add_option("--f", embed_f, "Feature channels")
      ->check(CLI::PositiveNumber);
  embed->add_option("--offsets", embed_offsets,
                    "Relative frame offsets (one per frame)")
      ->required()
      ->delimiter(',');
  embed->add_option("--temporal-dim", embed_temporal,
                    "Temporal channels (default F/4)");
  embed->add_option("--out", embed_out,
                    "Output prefix (writes .lgt and .json)")->required();

  // ---- render
  auto* render = app.add_subcommand("render", "Render lane graphs to SVG");
  std::vector<std::string> render_graphs;
  std::string render_out;
  render->add_option("--graph", render_graphs, "Graph JSON (repeatable)")
      ->required();
  render->add_option("--out", render_out, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (synth->parsed()) {
      return run_synth(seed, layout, lanes, frames, dt, noise, synth_out);
    }
    if (warp->parsed()) {
      return run_warp(warp_image, warp_rig, warp_ref_rig, warp_relative_time,
                      warp_grid.grid, warp_out);
    }
    if (aggregate->parsed()) {
      return run_aggregate(agg_frames, agg_op,
                           agg_seed_set
                               ? std::optional<std::uint64_t>(agg_seed)
                               : std::nullopt,
                           agg_out);
    }
    if (postmerge->parsed()) {
      return run_postmerge(pm_estimates, pm_ref, pm_params, pm_connect_tol,
                           pm_out);
    }
    if (eval->parsed()) {
      return run_eval(eval_pred, eval_gt, eval_match_dist, eval_out);
    }
    if (embed->parsed()) {
      return run_embed(embed_n, embed_x, embed_y, embed_f, embed_offsets,
                       embed_temporal, embed_out);
    }
    if (render->parsed()) {
      return run_render(render_graphs, render_out);
    }
  } catch (const lgk::io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const lgk::io::ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

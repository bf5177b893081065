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
#include <span>
#include <vector>

#include "lgk/lane_graph.hpp"
#include "lgk/tensor.hpp"

namespace lgk {

/// Channel budget of the spatial-temporal positional embedding. The
/// temporal channels encode the signed frame offset, the spatial channels
/// split evenly between row and column, all with the DETR sin/cos scheme
/// (per-pair frequency base_frequency^(-2k/dim)).
struct EmbeddingConfig {
  int feature_dim = 0;
  int temporal_dim = 0;
  int spatial_dims = 0;
  double base_frequency = 10000.0;

  /// temporal_dim = feature_dim / 4, remainder spatial.
  static EmbeddingConfig with_default_split(int feature_dim);

  /// Throws std::invalid_argument unless temporal_dim + spatial_dims ==
  /// feature_dim and every dim is even and positive.
  void ensure_valid() const;
};

/// Sin/cos encoding of a signed relative frame offset (past frames are
/// negative): channel 2k = sin(w_k t), 2k+1 = cos(w_k t).
std::vector<double> temporal_embedding(double t, const EmbeddingConfig& cfg);

/// Sin/cos encoding of a grid location; first half encodes the row, second
/// half the column.
std::vector<double> spatial_embedding(int row, int col,
                                      const EmbeddingConfig& cfg);

struct TokenProvenance {
  int frame = 0;
  int row = 0;
  int col = 0;
  bool operator==(const TokenProvenance&) const = default;
};

/// L x F token matrix with the source (frame, row, col) of every token.
struct TokenSequence {
  int token_count = 0;
  int feature_dim = 0;
  std::vector<float> tokens;                 // row-major L x F
  std::vector<TokenProvenance> provenance;   // length L

  std::span<const float> token(int index) const {
    return {tokens.data() + static_cast<size_t>(index) * feature_dim,
            static_cast<size_t>(feature_dim)};
  }
};

/// Flattens N frames of X x Y x F features into one sequence of N*X*Y
/// tokens (frame-major, then row-major), adding the spatial-temporal
/// embedding of each source position to its feature vector.
TokenSequence flatten_with_embeddings(std::span<const FeatureMap> frames,
                                      std::span<const double> offsets,
                                      const EmbeddingConfig& cfg);

/// Untrained single-layer query decoder. Exists to pin the output shapes
/// and normalizations of the query head: control points squashed into the
/// unit square, existence probabilities strictly inside (0, 1), attention
/// rows summing to one.
struct QueryDecodeResult {
  std::vector<std::array<PlanarPoint, 3>> control_points;  // Q x 3 x 2
  std::vector<double> existence;                           // Q
  int assoc_dim = 0;
  std::vector<double> association;                         // Q x assoc_dim
  std::vector<double> attention;                           // Q x L
};

QueryDecodeResult toy_query_decoder(const TokenSequence& sequence,
                                    int num_queries, std::uint64_t seed,
                                    int assoc_dim = 8);

}  // namespace lgk

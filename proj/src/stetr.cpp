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

#include "lgk/stetr.hpp"

#include <cmath>
#include <stdexcept>

#include "lgk/rng.hpp"

namespace lgk {

namespace {

/// Writes the sin/cos pairs of one scalar position into out[0..dim).
/// Pair k uses frequency base^(-2k/dim).
void sincos_encode(double position, int dim, double base,
                   std::span<double> out) {
  for (int channel = 0; channel < dim; ++channel) {
    const int pair = channel / 2;
    const double freq = std::pow(base, -2.0 * pair / dim);
    const double angle = freq * position;
    out[channel] = (channel % 2 == 0) ? std::sin(angle) : std::cos(angle);
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

EmbeddingConfig EmbeddingConfig::with_default_split(int feature_dim) {
  EmbeddingConfig cfg;
  cfg.feature_dim = feature_dim;
  cfg.temporal_dim = feature_dim / 4;
  cfg.spatial_dims = feature_dim - cfg.temporal_dim;
  return cfg;
}

void EmbeddingConfig::ensure_valid() const {
  if (feature_dim <= 0 || temporal_dim <= 0 || spatial_dims <= 0) {
    throw std::invalid_argument("EmbeddingConfig: dims must be positive");
  }
  if (temporal_dim + spatial_dims != feature_dim) {
    throw std::invalid_argument(
        "EmbeddingConfig: temporal_dim + spatial_dims != feature_dim");
  }
  if (feature_dim % 2 != 0 || temporal_dim % 2 != 0 || spatial_dims % 2 != 0) {
    throw std::invalid_argument("EmbeddingConfig: dims must be even");
  }
}

std::vector<double> temporal_embedding(double t, const EmbeddingConfig& cfg) {
  cfg.ensure_valid();
  std::vector<double> out(cfg.temporal_dim);
  sincos_encode(t, cfg.temporal_dim, cfg.base_frequency, out);
  return out;
}

std::vector<double> spatial_embedding(int row, int col,
                                      const EmbeddingConfig& cfg) {
  cfg.ensure_valid();
  std::vector<double> out(cfg.spatial_dims);
  const int half = cfg.spatial_dims / 2;
  sincos_encode(row, half, cfg.base_frequency, {out.data(), (size_t)half});
  sincos_encode(col, half, cfg.base_frequency,
                {out.data() + half, static_cast<size_t>(cfg.spatial_dims -
                                                        half)});
  return out;
}

TokenSequence flatten_with_embeddings(std::span<const FeatureMap> frames,
                                      std::span<const double> offsets,
                                      const EmbeddingConfig& cfg) {
  cfg.ensure_valid();
  if (frames.empty()) {
    throw std::invalid_argument("flatten_with_embeddings: no frames");
  }
  if (frames.size() != offsets.size()) {
    throw std::invalid_argument(
        "flatten_with_embeddings: one offset per frame required");
  }
  const int rows = frames[0].height();
  const int cols = frames[0].width();
  for (const FeatureMap& frame : frames) {
    if (frame.height() != rows || frame.width() != cols ||
        frame.channels() != cfg.feature_dim) {
      throw std::invalid_argument(
          "flatten_with_embeddings: frame shape mismatch");
    }
  }

  TokenSequence seq;
  seq.feature_dim = cfg.feature_dim;
  seq.token_count = static_cast<int>(frames.size()) * rows * cols;
  seq.tokens.reserve(static_cast<size_t>(seq.token_count) * cfg.feature_dim);
  seq.provenance.reserve(seq.token_count);

  for (size_t n = 0; n < frames.size(); ++n) {
    const std::vector<double> temporal = temporal_embedding(offsets[n], cfg);
    for (int row = 0; row < rows; ++row) {
      for (int col = 0; col < cols; ++col) {
        const std::vector<double> spatial = spatial_embedding(row, col, cfg);
        const auto features = frames[n].cell(row, col);
        for (int ch = 0; ch < cfg.feature_dim; ++ch) {
          const double embed = ch < cfg.temporal_dim
                                   ? temporal[ch]
                                   : spatial[ch - cfg.temporal_dim];
          seq.tokens.push_back(static_cast<float>(features[ch] + embed));
        }
        seq.provenance.push_back(
            {static_cast<int>(n), row, col});
      }
    }
  }
  return seq;
}

QueryDecodeResult toy_query_decoder(const TokenSequence& sequence,
                                    int num_queries, std::uint64_t seed,
                                    int assoc_dim) {
  if (sequence.token_count == 0) {
    throw std::invalid_argument("toy_query_decoder: empty sequence");
  }
  if (num_queries < 1) {
    throw std::invalid_argument("toy_query_decoder: need at least 1 query");
  }
  const int dim = sequence.feature_dim;
  const int tokens = sequence.token_count;
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

  auto draw = [&rng, scale](size_t count) {
    std::vector<double> values(count);
    for (double& v : values) {
      v = rng.normal(scale);
    }
    return values;
  };
  const std::vector<double> queries = draw(static_cast<size_t>(num_queries) *
                                           dim);
  const std::vector<double> w_control = draw(static_cast<size_t>(6) * dim);
  const std::vector<double> w_exist = draw(dim);
  const std::vector<double> w_assoc = draw(static_cast<size_t>(assoc_dim) *
                                           dim);

  QueryDecodeResult result;
  result.assoc_dim = assoc_dim;
  result.control_points.resize(num_queries);
  result.existence.resize(num_queries);
  result.association.resize(static_cast<size_t>(num_queries) * assoc_dim);
  result.attention.resize(static_cast<size_t>(num_queries) * tokens);

  std::vector<double> context(dim);
  for (int q = 0; q < num_queries; ++q) {
    // Scaled dot-product attention over all tokens, softmax-normalized.
    std::span<double> attn{result.attention.data() +
                               static_cast<size_t>(q) * tokens,
                           static_cast<size_t>(tokens)};
    double max_score = -1e300;
    for (int l = 0; l < tokens; ++l) {
      const auto token = sequence.token(l);
      double score = 0.0;
      for (int ch = 0; ch < dim; ++ch) {
        score += queries[static_cast<size_t>(q) * dim + ch] * token[ch];
      }
      attn[l] = score * scale;
      max_score = std::max(max_score, attn[l]);
    }
    double norm = 0.0;
    for (int l = 0; l < tokens; ++l) {
      attn[l] = std::exp(attn[l] - max_score);
      norm += attn[l];
    }
    std::fill(context.begin(), context.end(), 0.0);
    for (int l = 0; l < tokens; ++l) {
      attn[l] /= norm;
      const auto token = sequence.token(l);
      for (int ch = 0; ch < dim; ++ch) {
        context[ch] += attn[l] * token[ch];
      }
    }

    auto head = [&context, dim](std::span<const double> weights, int out_row) {
      double acc = 0.0;
      for (int ch = 0; ch < dim; ++ch) {
        acc += weights[static_cast<size_t>(out_row) * dim + ch] * context[ch];
      }
      return acc;
    };
    for (int point = 0; point < 3; ++point) {
      result.control_points[q][point] =
          PlanarPoint(sigmoid(head(w_control, 2 * point)),
                      sigmoid(head(w_control, 2 * point + 1)));
    }
    result.existence[q] = sigmoid(head(w_exist, 0));
    for (int a = 0; a < assoc_dim; ++a) {
      result.association[static_cast<size_t>(q) * assoc_dim + a] =
          std::tanh(head(w_assoc, a));
    }
  }
  return result;
}

}  // namespace lgk

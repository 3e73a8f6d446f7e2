#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gkt/tensor.hpp"

namespace gkt {

struct QueryEmbeddings {
    int num_queries = 0;
    int d_model = 0;
    uint64_t init_seed = 0;
    std::vector<float> data; // [num_queries][d_model]

    const float* query(int i) const { return data.data() + static_cast<size_t>(i) * d_model; }
};

/// Single-head cross-attention parameters. Matrices are row-major with the
/// input dimension as rows: w_k[c][m] maps feature channel c to model dim m.
struct AttentionWeights {
    int channels = 0;
    int d_model = 0;
    std::vector<float> w_q; // [d_model][d_model]
    std::vector<float> w_k; // [channels][d_model]
    std::vector<float> w_v; // [channels][d_model]
    std::vector<float> w_o; // [d_model][d_model]
    std::vector<float> b_k; // [d_model]
    std::vector<float> b_v; // [d_model]
    std::vector<float> b_o; // [d_model]

    void validate() const;
};

struct BevFeatureMap {
    int rows = 0;
    int cols = 0;
    int d_model = 0;
    std::vector<float> data; // [row*cols + col][d_model]

    int num_queries() const { return rows * cols; }
};

struct AttendOptions {
    int threads = 1;
    /// When set, positions flagged invalid in `validity` are excluded from
    /// the softmax instead of attending to their zero-filled features.
    bool mask_invalid = false;
    /// Per-entry validity in LUT order, required if mask_invalid is true.
    std::span<const uint8_t> validity;
};

/// Deterministic uniform(-1/sqrt(d_model), 1/sqrt(d_model)) initialization.
QueryEmbeddings init_embeddings(int num_queries, int d_model, uint64_t seed);
AttentionWeights init_weights(int channels, int d_model, uint64_t seed);

/// Per query: keys/values from the unfolded block over the flattened
/// (view, scale, position) set, softmax(q W_q . K / sqrt(d_model)), weighted
/// value sum, output projection plus residual query. No positional encoding
/// over kernel positions.
BevFeatureMap attend(const QueryEmbeddings& queries, const UnfoldedFeatures& unfolded,
                     const AttentionWeights& weights, int bev_rows, int bev_cols,
                     const AttendOptions& options = {});

/// Softmax weights of a single query, for inspection.
std::vector<float> attention_map(const QueryEmbeddings& queries,
                                 const UnfoldedFeatures& unfolded,
                                 const AttentionWeights& weights, int query_index,
                                 const AttendOptions& options = {});

} // namespace gkt

#include "gkt/attention.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "gkt/error.hpp"
#include "gkt/parallel.hpp"
#include "gkt/rng.hpp"
#include "gkt/simd.hpp"

namespace gkt {

namespace {

// Counter tags keep the embedding and weight streams disjoint.
enum InitTag : uint64_t {
    kTagEmbeddings = 1,
    kTagWq,
    kTagWk,
    kTagWv,
    kTagWo,
    kTagBk,
    kTagBv,
    kTagBo,
};

void fill_uniform(std::vector<float>& out, uint64_t seed, uint64_t tag, double bound) {
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<float>(
            rng::uniform_range(rng::hash(seed, tag, i), -bound, bound));
    }
}

struct QueryScratch {
    std::vector<float> keys;    // [positions][d_model]
    std::vector<float> values;  // [positions][d_model]
    std::vector<float> q_proj;  // [d_model]
    std::vector<float> logits;  // [positions]
    std::vector<float> alpha;   // [positions]
    std::vector<float> context; // [d_model]

    void resize(int total_positions, int d_model) {
        keys.resize(static_cast<size_t>(total_positions) * d_model);
        values.resize(static_cast<size_t>(total_positions) * d_model);
        q_proj.resize(static_cast<size_t>(d_model));
        logits.resize(static_cast<size_t>(total_positions));
        alpha.resize(static_cast<size_t>(total_positions));
        context.resize(static_cast<size_t>(d_model));
    }
};

/// Attention weights for one query: keys from the unfolded block, logits
/// against the projected query, masked softmax. `scratch` must be resized.
void query_alpha(const QueryEmbeddings& queries, const UnfoldedFeatures& unfolded,
                 const AttentionWeights& weights, const AttendOptions& options, int query,
                 QueryScratch& scratch) {
    const simd::KernelTable& kernels = simd::active();
    const int d = weights.d_model;
    const int channels = weights.channels;
    const int per_kernel = unfolded.positions;
    const int num_sets = unfolded.num_views * unfolded.num_scales;
    const int total = num_sets * per_kernel;
    const float* block = unfolded.block(query);

    // Keys/values start from the biases, then accumulate one channel row at
    // a time so the block is read contiguously.
    for (int j = 0; j < total; ++j) {
        std::memcpy(scratch.keys.data() + static_cast<size_t>(j) * d, weights.b_k.data(),
                    static_cast<size_t>(d) * sizeof(float));
        std::memcpy(scratch.values.data() + static_cast<size_t>(j) * d, weights.b_v.data(),
                    static_cast<size_t>(d) * sizeof(float));
    }
    for (int set = 0; set < num_sets; ++set) {
        const float* set_block =
            block + static_cast<size_t>(set) * channels * per_kernel;
        for (int c = 0; c < channels; ++c) {
            const float* w_k_row = weights.w_k.data() + static_cast<size_t>(c) * d;
            const float* w_v_row = weights.w_v.data() + static_cast<size_t>(c) * d;
            for (int p = 0; p < per_kernel; ++p) {
                float f = set_block[static_cast<size_t>(c) * per_kernel + p];
                if (f == 0.0f) continue; // zero-filled positions contribute nothing
                size_t j = static_cast<size_t>(set) * per_kernel + p;
                kernels.axpy(d, f, w_k_row, scratch.keys.data() + j * d);
                kernels.axpy(d, f, w_v_row, scratch.values.data() + j * d);
            }
        }
    }

    std::fill(scratch.q_proj.begin(), scratch.q_proj.end(), 0.0f);
    const float* q_vec = queries.query(query);
    for (int t = 0; t < d; ++t) {
        if (q_vec[t] != 0.0f) {
            kernels.axpy(d, q_vec[t], weights.w_q.data() + static_cast<size_t>(t) * d,
                         scratch.q_proj.data());
        }
    }

    const float inv_sqrt_d = 1.0f / std::sqrt(static_cast<float>(d));
    const float neg_inf = -std::numeric_limits<float>::infinity();
    for (int j = 0; j < total; ++j) {
        bool masked = options.mask_invalid && !options.validity.empty() &&
                      options.validity[static_cast<size_t>(query) * total + j] == 0;
        if (masked) {
            scratch.logits[static_cast<size_t>(j)] = neg_inf;
            continue;
        }
        float logit = kernels.dot(d, scratch.q_proj.data(),
                                  scratch.keys.data() + static_cast<size_t>(j) * d) *
                      inv_sqrt_d;
        if (!std::isfinite(logit)) {
            throw Error(ErrorKind::Internal,
                        "non-finite attention logit at query " + std::to_string(query));
        }
        scratch.logits[static_cast<size_t>(j)] = logit;
    }

    float max_logit = neg_inf;
    for (int j = 0; j < total; ++j) max_logit = std::max(max_logit, scratch.logits[j]);
    if (max_logit == neg_inf) {
        // Every position masked: zero weights, zero context.
        std::fill(scratch.alpha.begin(), scratch.alpha.end(), 0.0f);
        return;
    }
    double sum = 0.0;
    for (int j = 0; j < total; ++j) {
        double e = scratch.logits[j] == neg_inf
                       ? 0.0
                       : std::exp(static_cast<double>(scratch.logits[j]) - max_logit);
        scratch.alpha[static_cast<size_t>(j)] = static_cast<float>(e);
        sum += e;
    }
    for (int j = 0; j < total; ++j) {
        scratch.alpha[static_cast<size_t>(j)] =
            static_cast<float>(scratch.alpha[static_cast<size_t>(j)] / sum);
    }
}

void validate_shapes(const QueryEmbeddings& queries, const UnfoldedFeatures& unfolded,
                     const AttentionWeights& weights, const AttendOptions& options) {
    weights.validate();
    if (queries.d_model != weights.d_model) {
        throw Error(ErrorKind::ShapeMismatch, "query d_model does not match weights");
    }
    if (unfolded.channels != weights.channels) {
        throw Error(ErrorKind::ShapeMismatch, "unfolded channels do not match weights");
    }
    if (queries.num_queries != unfolded.num_queries) {
        throw Error(ErrorKind::ShapeMismatch, "query count does not match unfolded blocks");
    }
    size_t total_positions = static_cast<size_t>(unfolded.num_queries) * unfolded.num_views *
                             unfolded.num_scales * unfolded.positions;
    if (options.mask_invalid && options.validity.size() != total_positions) {
        throw Error(ErrorKind::ShapeMismatch,
                    "mask_invalid needs one validity byte per unfolded position");
    }
}

} // namespace

void AttentionWeights::validate() const {
    if (channels <= 0 || d_model <= 0) {
        throw Error(ErrorKind::ShapeMismatch, "weights dims must be positive");
    }
    size_t d = static_cast<size_t>(d_model);
    size_t c = static_cast<size_t>(channels);
    if (w_q.size() != d * d || w_k.size() != c * d || w_v.size() != c * d ||
        w_o.size() != d * d || b_k.size() != d || b_v.size() != d || b_o.size() != d) {
        throw Error(ErrorKind::ShapeMismatch, "weight matrix sizes do not match dims");
    }
    for (const std::vector<float>* m : {&w_q, &w_k, &w_v, &w_o, &b_k, &b_v, &b_o}) {
        for (float v : *m) {
            if (!std::isfinite(v)) throw Error(ErrorKind::Config, "weights must be finite");
        }
    }
}

QueryEmbeddings init_embeddings(int num_queries, int d_model, uint64_t seed) {
    if (num_queries <= 0 || d_model <= 0) {
        throw Error(ErrorKind::Config, "embedding dims must be positive");
    }
    QueryEmbeddings out;
    out.num_queries = num_queries;
    out.d_model = d_model;
    out.init_seed = seed;
    out.data.resize(static_cast<size_t>(num_queries) * d_model);
    fill_uniform(out.data, seed, kTagEmbeddings, 1.0 / std::sqrt(static_cast<double>(d_model)));
    return out;
}

AttentionWeights init_weights(int channels, int d_model, uint64_t seed) {
    if (channels <= 0 || d_model <= 0) {
        throw Error(ErrorKind::Config, "weight dims must be positive");
    }
    AttentionWeights w;
    w.channels = channels;
    w.d_model = d_model;
    size_t d = static_cast<size_t>(d_model);
    size_t c = static_cast<size_t>(channels);
    w.w_q.resize(d * d);
    w.w_k.resize(c * d);
    w.w_v.resize(c * d);
    w.w_o.resize(d * d);
    w.b_k.resize(d);
    w.b_v.resize(d);
    w.b_o.resize(d);
    double bound = 1.0 / std::sqrt(static_cast<double>(d_model));
    fill_uniform(w.w_q, seed, kTagWq, bound);
    fill_uniform(w.w_k, seed, kTagWk, bound);
    fill_uniform(w.w_v, seed, kTagWv, bound);
    fill_uniform(w.w_o, seed, kTagWo, bound);
    fill_uniform(w.b_k, seed, kTagBk, bound);
    fill_uniform(w.b_v, seed, kTagBv, bound);
    fill_uniform(w.b_o, seed, kTagBo, bound);
    return w;
}

BevFeatureMap attend(const QueryEmbeddings& queries, const UnfoldedFeatures& unfolded,
                     const AttentionWeights& weights, int bev_rows, int bev_cols,
                     const AttendOptions& options) {
    validate_shapes(queries, unfolded, weights, options);
    if (bev_rows * bev_cols != queries.num_queries) {
        throw Error(ErrorKind::ShapeMismatch, "bev dims do not match query count");
    }
    const int d = weights.d_model;
    const int total = unfolded.num_views * unfolded.num_scales * unfolded.positions;

    BevFeatureMap bev;
    bev.rows = bev_rows;
    bev.cols = bev_cols;
    bev.d_model = d;
    bev.data.resize(static_cast<size_t>(queries.num_queries) * d);

    const simd::KernelTable& kernels = simd::active();
    parallel_for(queries.num_queries, options.threads, [&](int64_t begin, int64_t end) {
        QueryScratch scratch;
        scratch.resize(total, d);
        for (int64_t q = begin; q < end; ++q) {
            query_alpha(queries, unfolded, weights, options, static_cast<int>(q), scratch);

            std::fill(scratch.context.begin(), scratch.context.end(), 0.0f);
            for (int j = 0; j < total; ++j) {
                float a = scratch.alpha[static_cast<size_t>(j)];
                if (a != 0.0f) {
                    kernels.axpy(d, a, scratch.values.data() + static_cast<size_t>(j) * d,
                                 scratch.context.data());
                }
            }

            float* out_row = bev.data.data() + static_cast<size_t>(q) * d;
            std::memcpy(out_row, weights.b_o.data(), static_cast<size_t>(d) * sizeof(float));
            for (int t = 0; t < d; ++t) {
                float ctx = scratch.context[static_cast<size_t>(t)];
                if (ctx != 0.0f) {
                    kernels.axpy(d, ctx, weights.w_o.data() + static_cast<size_t>(t) * d,
                                 out_row);
                }
            }
            kernels.axpy(d, 1.0f, queries.query(static_cast<int>(q)), out_row); // residual
            for (int t = 0; t < d; ++t) {
                if (!std::isfinite(out_row[t])) {
                    throw Error(ErrorKind::Internal,
                                "non-finite output at query " + std::to_string(q));
                }
            }
        }
    });
    return bev;
}

std::vector<float> attention_map(const QueryEmbeddings& queries,
                                 const UnfoldedFeatures& unfolded,
                                 const AttentionWeights& weights, int query_index,
                                 const AttendOptions& options) {
    validate_shapes(queries, unfolded, weights, options);
    if (query_index < 0 || query_index >= unfolded.num_queries) {
        throw Error(ErrorKind::OutOfRange, "query " + std::to_string(query_index));
    }
    const int total = unfolded.num_views * unfolded.num_scales * unfolded.positions;
    QueryScratch scratch;
    scratch.resize(total, weights.d_model);
    query_alpha(queries, unfolded, weights, options, query_index, scratch);
    return scratch.alpha;
}

} // namespace gkt

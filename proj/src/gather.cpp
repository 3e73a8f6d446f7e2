#include "gkt/gather.hpp"

#include <algorithm>
#include <cstring>

#include "gkt/error.hpp"
#include "gkt/parallel.hpp"
#include "gkt/simd.hpp"

namespace gkt {

const char* to_string(GatherStrategy strategy) {
    switch (strategy) {
        case GatherStrategy::Im2col: return "im2col";
        case GatherStrategy::Sample: return "sample";
        case GatherStrategy::Lut: return "lut";
    }
    return "?";
}

GatherStrategy gather_strategy_from_string(const std::string& s) {
    if (s == "im2col") return GatherStrategy::Im2col;
    if (s == "sample") return GatherStrategy::Sample;
    if (s == "lut") return GatherStrategy::Lut;
    throw Error(ErrorKind::Config, "unknown gather strategy '" + s + "'");
}

namespace {

constexpr int kMaxPositionsOnStack = 512;

void resize_output(UnfoldedFeatures& out, int num_queries, int num_views, int num_scales,
                   int channels, int positions) {
    out.num_queries = num_queries;
    out.num_views = num_views;
    out.num_scales = num_scales;
    out.channels = channels;
    out.positions = positions;
    out.data.resize(static_cast<size_t>(num_queries) * out.block_size());
}

/// Same position math as build_lut: project, round, offset at feature scale,
/// validity for off-map or behind-camera positions.
void compute_positions(const CameraView& view, int stride, int64_t height, int64_t width,
                       const Vec3& center, const std::vector<KernelOffset>& offsets,
                       uint32_t* idx, uint8_t* valid) {
    int count = static_cast<int>(offsets.size());
    std::fill_n(idx, count, 0u);
    std::fill_n(valid, count, uint8_t{0});
    RoundedPixel rp = round_pixel(project_point(center, view, stride));
    if (!rp.valid) return;
    for (int p = 0; p < count; ++p) {
        int64_t r = rp.row + offsets[static_cast<size_t>(p)].d_row;
        int64_t c = rp.col + offsets[static_cast<size_t>(p)].d_col;
        if (r < 0 || r >= height || c < 0 || c >= width) continue;
        idx[p] = static_cast<uint32_t>(r * width + c);
        valid[p] = 1;
    }
}

} // namespace

void gather_sample_into(UnfoldedFeatures& out, const FeaturePyramid& pyramid,
                        const CameraRig& rig, const BevGridSpec& grid, const KernelSpec& kernel,
                        const GatherOptions& options) {
    pyramid.validate_against(rig);
    grid.validate();
    const std::vector<KernelOffset> offsets = kernel_offsets(kernel);
    const int positions = static_cast<int>(offsets.size());
    if (positions > kMaxPositionsOnStack) {
        throw Error(ErrorKind::Config, "kernel has too many positions");
    }
    const int num_views = pyramid.num_views;
    const int num_scales = pyramid.num_scales;
    const int channels = pyramid.channels;
    resize_output(out, grid.num_queries(), num_views, num_scales, channels, positions);

    const simd::KernelTable& kernels = simd::active();
    parallel_for(grid.num_queries(), options.threads, [&](int64_t begin, int64_t end) {
        uint32_t idx[kMaxPositionsOnStack];
        uint8_t valid[kMaxPositionsOnStack];
        for (int64_t q = begin; q < end; ++q) {
            Vec3 center = cell_center(grid, static_cast<int>(q) / grid.cols,
                                      static_cast<int>(q) % grid.cols);
            float* block = out.block(static_cast<int>(q));
            for (int v = 0; v < num_views; ++v) {
                for (int s = 0; s < num_scales; ++s) {
                    const FeatureMap& map = pyramid.map(v, s);
                    compute_positions(rig.views[static_cast<size_t>(v)],
                                      rig.scale_strides[static_cast<size_t>(s)], map.height,
                                      map.width, center, offsets, idx, valid);
                    float* dst = block + (static_cast<size_t>(v) * num_scales + s) *
                                             static_cast<size_t>(channels) * positions;
                    kernels.gather_block(map.data.data(), map.plane_size(), channels, idx, valid,
                                         positions, dst);
                }
            }
        }
    });
}

void gather_lut_into(UnfoldedFeatures& out, const FeaturePyramid& pyramid, const Lut& lut,
                     const GatherOptions& options) {
    pyramid.validate_shape();
    if (static_cast<uint32_t>(pyramid.num_views) != lut.num_views ||
        static_cast<uint32_t>(pyramid.num_scales) != lut.num_scales) {
        throw Error(ErrorKind::ShapeMismatch, "LUT view/scale grid does not match pyramid");
    }
    for (int v = 0; v < pyramid.num_views; ++v) {
        for (int s = 0; s < pyramid.num_scales; ++s) {
            const FeatureMap& map = pyramid.map(v, s);
            size_t plane = static_cast<size_t>(v) * lut.num_scales + s;
            if (lut.plane_heights[plane] != static_cast<uint32_t>(map.height) ||
                lut.plane_widths[plane] != static_cast<uint32_t>(map.width)) {
                throw Error(ErrorKind::ShapeMismatch,
                            "LUT plane dims do not match pyramid map (" + std::to_string(v) +
                                "," + std::to_string(s) + ")");
            }
        }
    }
    const int num_views = pyramid.num_views;
    const int num_scales = pyramid.num_scales;
    const int channels = pyramid.channels;
    const int positions = static_cast<int>(lut.positions_per_kernel);
    resize_output(out, static_cast<int>(lut.num_queries), num_views, num_scales, channels,
                  positions);

    const simd::KernelTable& kernels = simd::active();
    parallel_for(lut.num_queries, options.threads, [&](int64_t begin, int64_t end) {
        for (int64_t q = begin; q < end; ++q) {
            size_t entry = static_cast<size_t>(q) * lut.entries_per_query();
            float* block = out.block(static_cast<int>(q));
            for (int v = 0; v < num_views; ++v) {
                for (int s = 0; s < num_scales; ++s) {
                    const FeatureMap& map = pyramid.map(v, s);
                    float* dst = block + (static_cast<size_t>(v) * num_scales + s) *
                                             static_cast<size_t>(channels) * positions;
                    kernels.gather_block(map.data.data(), map.plane_size(), channels,
                                         lut.indices.data() + entry, lut.valid.data() + entry,
                                         positions, dst);
                    entry += static_cast<size_t>(positions);
                }
            }
        }
    });
}

void gather_im2col_into(UnfoldedFeatures& out, const FeaturePyramid& pyramid,
                        const CameraRig& rig, const BevGridSpec& grid, const KernelSpec& kernel,
                        const GatherOptions& options) {
    pyramid.validate_against(rig);
    grid.validate();
    const std::vector<KernelOffset> offsets = kernel_offsets(kernel);
    const int positions = static_cast<int>(offsets.size());
    if (positions > kMaxPositionsOnStack) {
        throw Error(ErrorKind::Config, "kernel has too many positions");
    }
    const int num_views = pyramid.num_views;
    const int num_scales = pyramid.num_scales;
    const int channels = pyramid.channels;

    size_t total_bytes = 0;
    for (const FeatureMap& map : pyramid.maps) {
        total_bytes += map.plane_size() * static_cast<size_t>(channels) * positions * sizeof(float);
    }
    if (total_bytes > options.im2col_memory_cap_bytes) {
        throw Error(ErrorKind::MemoryCap,
                    "im2col column tensor needs " + std::to_string(total_bytes) +
                        " bytes, cap is " + std::to_string(options.im2col_memory_cap_bytes));
    }

    // Stage 1: unfold every pixel of every map into [channel][position][pixel]
    // columns, zero-padding where the window leaves the map.
    std::vector<std::vector<float>> columns(pyramid.maps.size());
    for (size_t m = 0; m < pyramid.maps.size(); ++m) {
        const FeatureMap& map = pyramid.maps[m];
        const int height = map.height;
        const int width = map.width;
        std::vector<float>& col = columns[m];
        col.resize(static_cast<size_t>(channels) * positions * map.plane_size());
        parallel_for(channels, options.threads, [&](int64_t c_begin, int64_t c_end) {
            for (int64_t c = c_begin; c < c_end; ++c) {
                const float* plane = map.plane(static_cast<int>(c));
                for (int p = 0; p < positions; ++p) {
                    const KernelOffset off = offsets[static_cast<size_t>(p)];
                    float* dst = col.data() +
                                 (static_cast<size_t>(c) * positions + p) * map.plane_size();
                    for (int r0 = 0; r0 < height; ++r0) {
                        float* dst_row = dst + static_cast<size_t>(r0) * width;
                        int r = r0 + off.d_row;
                        if (r < 0 || r >= height) {
                            std::fill_n(dst_row, width, 0.0f);
                            continue;
                        }
                        const float* src_row = plane + static_cast<size_t>(r) * width;
                        int copy_begin = std::clamp(-off.d_col, 0, width);
                        int copy_end = std::clamp(width - off.d_col, copy_begin, width);
                        std::fill_n(dst_row, copy_begin, 0.0f);
                        if (copy_end > copy_begin) {
                            std::memcpy(dst_row + copy_begin, src_row + copy_begin + off.d_col,
                                        static_cast<size_t>(copy_end - copy_begin) *
                                            sizeof(float));
                        }
                        std::fill_n(dst_row + copy_end, width - copy_end, 0.0f);
                    }
                }
            }
        });
    }

    // Stage 2: select each query's column at its prior pixel. Priors off the
    // map have no column and are gathered directly with identical semantics.
    resize_output(out, grid.num_queries(), num_views, num_scales, channels, positions);
    const simd::KernelTable& kernels = simd::active();
    parallel_for(grid.num_queries(), options.threads, [&](int64_t begin, int64_t end) {
        uint32_t idx[kMaxPositionsOnStack];
        uint8_t valid[kMaxPositionsOnStack];
        for (int64_t q = begin; q < end; ++q) {
            Vec3 center = cell_center(grid, static_cast<int>(q) / grid.cols,
                                      static_cast<int>(q) % grid.cols);
            float* block = out.block(static_cast<int>(q));
            for (int v = 0; v < num_views; ++v) {
                for (int s = 0; s < num_scales; ++s) {
                    const FeatureMap& map = pyramid.map(v, s);
                    float* dst = block + (static_cast<size_t>(v) * num_scales + s) *
                                             static_cast<size_t>(channels) * positions;
                    RoundedPixel rp = round_pixel(
                        project_point(center, rig.views[static_cast<size_t>(v)],
                                      rig.scale_strides[static_cast<size_t>(s)]));
                    size_t n = static_cast<size_t>(channels) * positions;
                    if (!rp.valid) {
                        std::fill_n(dst, n, 0.0f);
                        continue;
                    }
                    if (rp.row >= 0 && rp.row < map.height && rp.col >= 0 && rp.col < map.width) {
                        size_t pixel = static_cast<size_t>(rp.row) * map.width +
                                       static_cast<size_t>(rp.col);
                        const std::vector<float>& col =
                            columns[static_cast<size_t>(v) * num_scales + s];
                        kernels.strided_copy(col.data() + pixel, map.plane_size(),
                                             static_cast<int>(n), dst);
                    } else {
                        compute_positions(rig.views[static_cast<size_t>(v)],
                                          rig.scale_strides[static_cast<size_t>(s)], map.height,
                                          map.width, center, offsets, idx, valid);
                        kernels.gather_block(map.data.data(), map.plane_size(), channels, idx,
                                             valid, positions, dst);
                    }
                }
            }
        }
    });
}

UnfoldedFeatures gather_im2col(const FeaturePyramid& pyramid, const CameraRig& rig,
                               const BevGridSpec& grid, const KernelSpec& kernel,
                               const GatherOptions& options) {
    UnfoldedFeatures out;
    gather_im2col_into(out, pyramid, rig, grid, kernel, options);
    return out;
}

UnfoldedFeatures gather_sample(const FeaturePyramid& pyramid, const CameraRig& rig,
                               const BevGridSpec& grid, const KernelSpec& kernel,
                               const GatherOptions& options) {
    UnfoldedFeatures out;
    gather_sample_into(out, pyramid, rig, grid, kernel, options);
    return out;
}

UnfoldedFeatures gather_lut(const FeaturePyramid& pyramid, const Lut& lut,
                            const GatherOptions& options) {
    UnfoldedFeatures out;
    gather_lut_into(out, pyramid, lut, options);
    return out;
}

} // namespace gkt

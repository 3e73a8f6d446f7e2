#pragma once

#include <cstdint>
#include <vector>

#include "gkt/geometry.hpp"

namespace gkt {

/// One view/scale feature map, channel-major: data[c*H*W + r*W + col].
struct FeatureMap {
    int view = 0;
    int scale = 0;
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> data;

    size_t plane_size() const { return static_cast<size_t>(height) * width; }
    const float* plane(int c) const { return data.data() + static_cast<size_t>(c) * plane_size(); }
    void validate() const;
};

/// Dense (view, scale) grid of feature maps, view-major, shared channel count.
struct FeaturePyramid {
    int num_views = 0;
    int num_scales = 0;
    int channels = 0;
    std::vector<FeatureMap> maps;

    const FeatureMap& map(int view, int scale) const {
        return maps[static_cast<size_t>(view) * num_scales + scale];
    }
    FeatureMap& map(int view, int scale) {
        return maps[static_cast<size_t>(view) * num_scales + scale];
    }

    /// Dims and layout only; cheap enough for per-gather precondition checks.
    void validate_shape() const;
    /// validate_shape plus a full finiteness scan of the data.
    void validate() const;
    /// Throws Error(ShapeMismatch) unless every map's dims equal
    /// ceil(image_size / stride) for the matching rig view/scale.
    void validate_against(const CameraRig& rig) const;
};

/// Unfolded kernel features, one block per BEV query with layout
/// [view][scale][channel][position].
struct UnfoldedFeatures {
    int num_queries = 0;
    int num_views = 0;
    int num_scales = 0;
    int channels = 0;
    int positions = 0; // per kernel
    std::vector<float> data;

    size_t block_size() const {
        return static_cast<size_t>(num_views) * num_scales * channels * positions;
    }
    float* block(int query) { return data.data() + static_cast<size_t>(query) * block_size(); }
    const float* block(int query) const {
        return data.data() + static_cast<size_t>(query) * block_size();
    }

    /// Bitwise content equality (memcmp), not float ==.
    bool bit_identical(const UnfoldedFeatures& other) const;
    /// Index of the first differing float, or -1 when bit-identical.
    int64_t first_difference(const UnfoldedFeatures& other) const;
};

} // namespace gkt

#include "gkt/tensor.hpp"

#include <cmath>
#include <cstring>

#include "gkt/error.hpp"

namespace gkt {

void FeatureMap::validate() const {
    if (channels <= 0 || height <= 0 || width <= 0) {
        throw Error(ErrorKind::ShapeMismatch, "feature map dims must be positive");
    }
    if (data.size() != static_cast<size_t>(channels) * plane_size()) {
        throw Error(ErrorKind::ShapeMismatch, "feature map data length does not match dims");
    }
    for (float v : data) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Config, "feature map contains non-finite value");
    }
}

void FeaturePyramid::validate_shape() const {
    if (num_views <= 0 || num_scales <= 0 || channels <= 0) {
        throw Error(ErrorKind::ShapeMismatch, "pyramid dims must be positive");
    }
    if (maps.size() != static_cast<size_t>(num_views) * num_scales) {
        throw Error(ErrorKind::ShapeMismatch, "pyramid is not a complete (view, scale) grid");
    }
    for (const FeatureMap& m : maps) {
        if (m.channels != channels) {
            throw Error(ErrorKind::ShapeMismatch, "pyramid channel count is not shared");
        }
        if (m.height <= 0 || m.width <= 0 ||
            m.data.size() != static_cast<size_t>(m.channels) * m.plane_size()) {
            throw Error(ErrorKind::ShapeMismatch, "feature map data length does not match dims");
        }
    }
}

void FeaturePyramid::validate() const {
    validate_shape();
    for (const FeatureMap& m : maps) m.validate();
}

void FeaturePyramid::validate_against(const CameraRig& rig) const {
    validate_shape();
    if (num_views != rig.num_views() || num_scales != rig.num_scales()) {
        throw Error(ErrorKind::ShapeMismatch, "pyramid view/scale grid does not match rig");
    }
    for (int v = 0; v < num_views; ++v) {
        for (int s = 0; s < num_scales; ++s) {
            const FeatureMap& m = map(v, s);
            if (m.height != rig.feature_height(v, s) || m.width != rig.feature_width(v, s)) {
                throw Error(ErrorKind::ShapeMismatch,
                            "feature map (" + std::to_string(v) + "," + std::to_string(s) +
                                ") dims do not match rig image_size / stride");
            }
        }
    }
}

bool UnfoldedFeatures::bit_identical(const UnfoldedFeatures& other) const {
    return num_queries == other.num_queries && num_views == other.num_views &&
           num_scales == other.num_scales && channels == other.channels &&
           positions == other.positions && data.size() == other.data.size() &&
           std::memcmp(data.data(), other.data.data(), data.size() * sizeof(float)) == 0;
}

int64_t UnfoldedFeatures::first_difference(const UnfoldedFeatures& other) const {
    if (data.size() != other.data.size()) return 0;
    for (size_t i = 0; i < data.size(); ++i) {
        if (std::memcmp(&data[i], &other.data[i], sizeof(float)) != 0) {
            return static_cast<int64_t>(i);
        }
    }
    return -1;
}

} // namespace gkt

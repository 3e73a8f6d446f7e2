#pragma once

#include <cstdint>

#include "gkt/config.hpp"
#include "gkt/tensor.hpp"

namespace gkt {

/// Parameters for the synthetic surround rig and feature generator. Defaults
/// match the standard instance: six yaw-distributed cameras, two feature
/// scales, a 25x25 query grid over a 100 m square.
struct SyntheticSpec {
    int views = 6;
    std::vector<int> scale_strides = {8, 16};
    int grid_rows = 25;
    int grid_cols = 25;
    double extent = 50.0; // grid covers [-extent, extent]^2 meters
    double height_z = 0.0;
    int channels = 128;
    int image_height = 224;
    int image_width = 480;
    int k_h = 3;
    int k_w = 3;
    uint64_t seed = 0;

    void validate() const;
};

/// Yaw-distributed surround rig with the matching grid and kernel config.
/// Fully deterministic in the spec.
SceneConfig make_synthetic_scene(const SyntheticSpec& spec);

/// Seeded uniform [-1, 1) features shaped to the rig. Deterministic.
FeaturePyramid make_synthetic_features(const SceneConfig& scene, int channels, uint64_t seed);

} // namespace gkt

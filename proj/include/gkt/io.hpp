#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gkt/attention.hpp"
#include "gkt/tensor.hpp"

namespace gkt {

// Feature tensor format "GKTF" (little-endian):
//   magic "GKTF" | u16 version | u32 num_views | u32 num_scales | u32 channels
//   | per (view,scale), view-major: u32 height, u32 width,
//     then height*width*channels f32 in [channel][row][col] order
constexpr uint16_t kFeatureFormatVersion = 1;

void serialize_features(const FeaturePyramid& pyramid, std::ostream& out);
FeaturePyramid deserialize_features(std::istream& in);
void save_features(const FeaturePyramid& pyramid, const std::string& path);
FeaturePyramid load_features(const std::string& path);

// Attention weights format "GKTW" (little-endian):
//   magic "GKTW" | u16 version | u32 channels | u32 d_model
//   | w_q (d*d) | w_k (C*d) | w_v (C*d) | w_o (d*d) | b_k (d) | b_v (d)
//   | b_o (d), all f32 row-major
constexpr uint16_t kWeightsFormatVersion = 1;

void serialize_weights(const AttentionWeights& weights, std::ostream& out);
AttentionWeights deserialize_weights(std::istream& in);
void save_weights(const AttentionWeights& weights, const std::string& path);
AttentionWeights load_weights(const std::string& path);

/// BEV output reuses the feature container: one view, one scale, d_model
/// channels, rows x cols plane.
FeaturePyramid bev_as_pyramid(const BevFeatureMap& bev);

/// Binary PGM (P5), 8-bit, values scaled so the max maps to 255.
void write_pgm(const std::string& path, int height, int width, std::span<const float> values);

} // namespace gkt

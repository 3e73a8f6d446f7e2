#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gkt/geometry.hpp"
#include "gkt/grid.hpp"

namespace gkt {

/// Precomputed BEV-query -> pixel-index correspondence. Entry order is
/// query-major, then view, then scale, then kernel-offset order, so the
/// block for one (query, view, scale) is contiguous. Invalid entries (prior
/// behind the camera, or position off the feature map) carry index 0 and
/// valid 0; gathers substitute zeros for them.
struct Lut {
    uint32_t num_queries = 0;
    uint32_t num_views = 0;
    uint32_t num_scales = 0;
    uint32_t positions_per_kernel = 0;
    std::vector<uint32_t> plane_heights; // one per (view, scale), view-major
    std::vector<uint32_t> plane_widths;
    std::vector<uint32_t> indices; // flat row*W + col into the plane
    std::vector<uint8_t> valid;    // 0 or 1, parallel to indices
    uint64_t fingerprint = 0;

    size_t entries_per_query() const {
        return static_cast<size_t>(num_views) * num_scales * positions_per_kernel;
    }
    size_t num_entries() const { return static_cast<size_t>(num_queries) * entries_per_query(); }

    bool operator==(const Lut&) const = default;
};

/// Contiguous view of one query's entries, ordered (view, scale, position).
struct LutSlice {
    std::span<const uint32_t> indices;
    std::span<const uint8_t> valid;
    uint32_t num_views = 0;
    uint32_t num_scales = 0;
    uint32_t positions = 0;

    uint32_t index(int view, int scale, int pos) const {
        return indices[(static_cast<size_t>(view) * num_scales + scale) * positions + pos];
    }
    bool is_valid(int view, int scale, int pos) const {
        return valid[(static_cast<size_t>(view) * num_scales + scale) * positions + pos] != 0;
    }
};

/// 64-bit FNV-1a over the canonical little-endian encoding of the inputs.
uint64_t input_fingerprint(const CameraRig& rig, const BevGridSpec& grid,
                           const KernelSpec& kernel);

/// Projects every cell center into every view and scale, rounds, applies the
/// kernel offsets at feature-map resolution, and records flat indices plus
/// validity. `height_override` replaces the grid's plane height (the
/// fingerprint covers the effective value). `threads` parallelizes over
/// queries; the result is identical for any thread count.
Lut build_lut(const CameraRig& rig, const BevGridSpec& grid, const KernelSpec& kernel,
              std::optional<double> height_override = std::nullopt, int threads = 1);

/// Constant-time access to one query's block; throws Error(OutOfRange).
LutSlice lookup(const Lut& lut, int query_index);

// Binary format "GKTL" (all integers little-endian):
//   magic "GKTL" | u16 version | u64 fingerprint | u32 num_queries
//   | u32 num_views | u32 num_scales | u32 positions_per_kernel
//   | per (view,scale): u32 height, u32 width
//   | num_entries * u32 index | num_entries * u8 valid
void serialize_lut(const Lut& lut, std::ostream& out);
Lut deserialize_lut(std::istream& in);
std::vector<uint8_t> serialize_lut_bytes(const Lut& lut);
Lut deserialize_lut_bytes(std::span<const uint8_t> bytes);

void save_lut(const Lut& lut, const std::string& path);
Lut load_lut(const std::string& path);

constexpr uint16_t kLutFormatVersion = 1;

} // namespace gkt

#pragma once

#include <cstdint>
#include <string>

#include "gkt/lut.hpp"
#include "gkt/tensor.hpp"

namespace gkt {

enum class GatherStrategy : int { Im2col = 0, Sample = 1, Lut = 2 };

const char* to_string(GatherStrategy strategy);
GatherStrategy gather_strategy_from_string(const std::string& s);

struct GatherOptions {
    int threads = 1;
    /// Upper bound on the im2col column-tensor materialization; exceeding it
    /// throws Error(MemoryCap) instead of silently thrashing.
    size_t im2col_memory_cap_bytes = size_t{2} * 1024 * 1024 * 1024;
};

// All three strategies produce bit-identical UnfoldedFeatures; they differ
// only in how the kernel features reach the output block.

/// Unfolds every pixel of every feature map into a column tensor
/// ([channel*position][pixel], zero-padded at the borders), then selects the
/// column at each query's prior pixel. Priors that fall off the map have no
/// materialized column and are gathered directly with the same zero-fill
/// rule, which keeps the output identical to the other strategies.
UnfoldedFeatures gather_im2col(const FeaturePyramid& pyramid, const CameraRig& rig,
                               const BevGridSpec& grid, const KernelSpec& kernel,
                               const GatherOptions& options = {});

/// Projects, rounds and offsets per query at gather time; nearest-pixel
/// reads with zero fill for out-of-bounds positions.
UnfoldedFeatures gather_sample(const FeaturePyramid& pyramid, const CameraRig& rig,
                               const BevGridSpec& grid, const KernelSpec& kernel,
                               const GatherOptions& options = {});

/// Pure indexed reads from the precomputed LUT; no projection math runs at
/// gather time. Throws Error(ShapeMismatch) when the LUT's shape metadata
/// disagrees with the pyramid.
UnfoldedFeatures gather_lut(const FeaturePyramid& pyramid, const Lut& lut,
                            const GatherOptions& options = {});

// Reuse-friendly variants for benchmarking; `out` is resized as needed.
void gather_im2col_into(UnfoldedFeatures& out, const FeaturePyramid& pyramid,
                        const CameraRig& rig, const BevGridSpec& grid, const KernelSpec& kernel,
                        const GatherOptions& options = {});
void gather_sample_into(UnfoldedFeatures& out, const FeaturePyramid& pyramid,
                        const CameraRig& rig, const BevGridSpec& grid, const KernelSpec& kernel,
                        const GatherOptions& options = {});
void gather_lut_into(UnfoldedFeatures& out, const FeaturePyramid& pyramid, const Lut& lut,
                     const GatherOptions& options = {});

} // namespace gkt

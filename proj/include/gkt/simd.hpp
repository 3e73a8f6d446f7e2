#pragma once

#include <cstdint>
#include <string>

namespace gkt::simd {

// The hot inner loops live behind this table: scalar reference kernels plus
// AVX2 (x86-64) and NEON (aarch64) variants selected once at startup from
// CPU capabilities. The copy kernels (gather/strided) move bits unchanged,
// so every variant is bit-identical to the scalar reference; the arithmetic
// kernels may reassociate and are equivalence-tested to tolerance.

enum class IsaLevel : int { Scalar = 0, Avx2 = 1, Neon = 2 };

const char* to_string(IsaLevel level);

struct KernelTable {
    /// out[c*count + p] = valid[p] ? plane[c*plane_stride + idx[p]] : 0.0f
    /// for c in [0, channels), p in [0, count).
    void (*gather_block)(const float* plane, size_t plane_stride, int channels,
                         const uint32_t* idx, const uint8_t* valid, int count, float* out);

    /// dst[i] = src[i * stride] for i in [0, count).
    void (*strided_copy)(const float* src, size_t stride, int count, float* dst);

    /// y[i] += a * x[i]
    void (*axpy)(int n, float a, const float* x, float* y);

    /// sum_i x[i] * y[i]
    float (*dot)(int n, const float* x, const float* y);

    /// x[i] *= a
    void (*scale)(int n, float a, float* x);
};

/// Table for an explicit level; throws Error(Config) if the CPU lacks it.
const KernelTable& table(IsaLevel level);

/// Best level supported by this CPU, honoring the GKT_SIMD environment
/// variable ("scalar", "avx2", "neon") when set.
IsaLevel detect();

/// Process-wide active table (detect() on first use, overridable).
const KernelTable& active();
IsaLevel active_level();
void set_active(IsaLevel level);

bool supported(IsaLevel level);

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
extern const KernelTable neon_table;
#endif
} // namespace detail

} // namespace gkt::simd

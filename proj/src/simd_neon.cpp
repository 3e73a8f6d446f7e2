#include "gkt/simd.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>

namespace gkt::simd {
namespace {

// NEON has no gather instruction; the indexed loads stay scalar and only the
// stores/selects and the arithmetic kernels vectorize.

void gather_block_neon(const float* plane, size_t plane_stride, int channels,
                       const uint32_t* idx, const uint8_t* valid, int count, float* out) {
    for (int c = 0; c < channels; ++c) {
        const float* src = plane + static_cast<size_t>(c) * plane_stride;
        float* dst = out + static_cast<size_t>(c) * count;
        int p = 0;
        for (; p + 4 <= count; p += 4) {
            float32x4_t v = {valid[p + 0] ? src[idx[p + 0]] : 0.0f,
                             valid[p + 1] ? src[idx[p + 1]] : 0.0f,
                             valid[p + 2] ? src[idx[p + 2]] : 0.0f,
                             valid[p + 3] ? src[idx[p + 3]] : 0.0f};
            vst1q_f32(dst + p, v);
        }
        for (; p < count; ++p) {
            dst[p] = valid[p] ? src[idx[p]] : 0.0f;
        }
    }
}

void strided_copy_neon(const float* src, size_t stride, int count, float* dst) {
    int i = 0;
    for (; i + 4 <= count; i += 4) {
        const float* base = src + static_cast<size_t>(i) * stride;
        float32x4_t v = {base[0], base[stride], base[2 * stride], base[3 * stride]};
        vst1q_f32(dst + i, v);
    }
    for (; i < count; ++i) {
        dst[i] = src[static_cast<size_t>(i) * stride];
    }
}

void axpy_neon(int n, float a, const float* x, float* y) {
    float32x4_t va = vdupq_n_f32(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        float32x4_t vy = vld1q_f32(y + i);
        vy = vfmaq_f32(vy, va, vld1q_f32(x + i));
        vst1q_f32(y + i, vy);
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

float dot_neon(int n, const float* x, const float* y) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = vfmaq_f32(acc, vld1q_f32(x + i), vld1q_f32(y + i));
    }
    float sum = vaddvq_f32(acc);
    for (; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

void scale_neon(int n, float a, float* x) {
    float32x4_t va = vdupq_n_f32(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        vst1q_f32(x + i, vmulq_f32(va, vld1q_f32(x + i)));
    }
    for (; i < n; ++i) {
        x[i] *= a;
    }
}

} // namespace

namespace detail {

const KernelTable neon_table = {
    gather_block_neon, strided_copy_neon, axpy_neon, dot_neon, scale_neon,
};

} // namespace detail
} // namespace gkt::simd

#endif // aarch64

#include "gkt/simd.hpp"

namespace gkt::simd {

// Reference kernels. Every other variant must match these: bit-exact for the
// copy kernels, within float tolerance for the arithmetic ones.

namespace {

void gather_block_scalar(const float* plane, size_t plane_stride, int channels,
                         const uint32_t* idx, const uint8_t* valid, int count, float* out) {
    for (int c = 0; c < channels; ++c) {
        const float* src = plane + static_cast<size_t>(c) * plane_stride;
        float* dst = out + static_cast<size_t>(c) * count;
        for (int p = 0; p < count; ++p) {
            dst[p] = valid[p] ? src[idx[p]] : 0.0f;
        }
    }
}

void strided_copy_scalar(const float* src, size_t stride, int count, float* dst) {
    for (int i = 0; i < count; ++i) {
        dst[i] = src[static_cast<size_t>(i) * stride];
    }
}

void axpy_scalar(int n, float a, const float* x, float* y) {
    for (int i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

float dot_scalar(int n, const float* x, const float* y) {
    float sum = 0.0f;
    for (int i = 0; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

void scale_scalar(int n, float a, float* x) {
    for (int i = 0; i < n; ++i) {
        x[i] *= a;
    }
}

} // namespace

namespace detail {

const KernelTable scalar_table = {
    gather_block_scalar, strided_copy_scalar, axpy_scalar, dot_scalar, scale_scalar,
};

} // namespace detail
} // namespace gkt::simd

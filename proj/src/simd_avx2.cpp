#include "gkt/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

namespace gkt::simd {
namespace {

// Masked gathers only touch lanes whose mask bit is set, so index 0 in
// invalid slots is never dereferenced and the zero fill comes straight from
// the pass-through source operand.

constexpr int kMaxChunks = 64; // up to 512 kernel positions hoisted

void gather_block_avx2(const float* plane, size_t plane_stride, int channels,
                       const uint32_t* idx, const uint8_t* valid, int count, float* out) {
    int chunks = count / 8;
    if (chunks > kMaxChunks) chunks = 0; // oversized kernels take the tail loop
    __m256i vidx[kMaxChunks];
    __m256 vmask[kMaxChunks];
    for (int k = 0; k < chunks; ++k) {
        vidx[k] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + k * 8));
        __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(valid + k * 8));
        __m256i lanes = _mm256_cvtepu8_epi32(bytes);
        vmask[k] = _mm256_castsi256_ps(_mm256_cmpgt_epi32(lanes, _mm256_setzero_si256()));
    }
    const __m256 zero = _mm256_setzero_ps();
    for (int c = 0; c < channels; ++c) {
        const float* src = plane + static_cast<size_t>(c) * plane_stride;
        float* dst = out + static_cast<size_t>(c) * count;
        int p = 0;
        for (int k = 0; k < chunks; ++k, p += 8) {
            __m256 g = _mm256_mask_i32gather_ps(zero, src, vidx[k], vmask[k], 4);
            _mm256_storeu_ps(dst + p, g);
        }
        for (; p < count; ++p) {
            dst[p] = valid[p] ? src[idx[p]] : 0.0f;
        }
    }
}

void strided_copy_avx2(const float* src, size_t stride, int count, float* dst) {
    // i32 gather offsets must stay in range; huge strides fall back.
    if (stride > (size_t{1} << 27) || static_cast<size_t>(count) * stride >= (size_t{1} << 31)) {
        for (int i = 0; i < count; ++i) dst[i] = src[static_cast<size_t>(i) * stride];
        return;
    }
    const int s = static_cast<int>(stride);
    __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    __m256i step = _mm256_mullo_epi32(lane, _mm256_set1_epi32(s));
    int i = 0;
    for (; i + 8 <= count; i += 8) {
        __m256i vindex = _mm256_add_epi32(step, _mm256_set1_epi32(i * s));
        _mm256_storeu_ps(dst + i, _mm256_i32gather_ps(src, vindex, 4));
    }
    for (; i < count; ++i) {
        dst[i] = src[static_cast<size_t>(i) * stride];
    }
}

void axpy_avx2(int n, float a, const float* x, float* y) {
    __m256 va = _mm256_set1_ps(a);
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 vy = _mm256_loadu_ps(y + i);
        vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
        _mm256_storeu_ps(y + i, vy);
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

float dot_avx2(int n, const float* x, const float* y) {
    __m256 acc = _mm256_setzero_ps();
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        acc = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc);
    }
    __m128 lo = _mm256_castps256_ps128(acc);
    __m128 hi = _mm256_extractf128_ps(acc, 1);
    __m128 sum4 = _mm_add_ps(lo, hi);
    __m128 sum2 = _mm_add_ps(sum4, _mm_movehl_ps(sum4, sum4));
    __m128 sum1 = _mm_add_ss(sum2, _mm_shuffle_ps(sum2, sum2, 1));
    float sum = _mm_cvtss_f32(sum1);
    for (; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

void scale_avx2(int n, float a, float* x) {
    __m256 va = _mm256_set1_ps(a);
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(x + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
    }
    for (; i < n; ++i) {
        x[i] *= a;
    }
}

} // namespace

namespace detail {

const KernelTable avx2_table = {
    gather_block_avx2, strided_copy_avx2, axpy_avx2, dot_avx2, scale_avx2,
};

} // namespace detail
} // namespace gkt::simd

#endif // x86_64

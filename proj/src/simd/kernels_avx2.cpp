#include "robatch/simd/distance.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace robatch::simd::detail {

namespace {

// ((l0+l4)+(l2+l6)) + ((l1+l5)+(l3+l7)) -- the tree the scalar kernel mirrors.
inline float reduce8(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 s = _mm_add_ps(lo, hi);                // (0+4, 1+5, 2+6, 3+7)
    __m128 t = _mm_movehl_ps(s, s);               // (2+6, 3+7, ., .)
    __m128 u = _mm_add_ps(s, t);                  // ((0+4)+(2+6), (1+5)+(3+7), ., .)
    __m128 w = _mm_shuffle_ps(u, u, _MM_SHUFFLE(1, 1, 1, 1));
    return _mm_cvtss_f32(_mm_add_ss(u, w));
}

} // namespace

float dot_f32_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        acc = _mm256_add_ps(acc, _mm256_mul_ps(va, vb)); // no fma, matches scalar rounding
    }
    float sum = reduce8(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

float l2sq_f32_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(d, d));
    }
    float sum = reduce8(acc);
    for (; i < n; ++i) {
        float d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

} // namespace robatch::simd::detail

#endif // x86_64

#include "robatch/simd/distance.hpp"

namespace robatch::simd::detail {

namespace {

inline float reduce8(const float acc[8]) {
    return ((acc[0] + acc[4]) + (acc[2] + acc[6])) + ((acc[1] + acc[5]) + (acc[3] + acc[7]));
}

} // namespace

float dot_f32_scalar(const float* a, const float* b, std::size_t n) {
    float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        for (int j = 0; j < 8; ++j) acc[j] += a[i + j] * b[i + j];
    }
    float sum = reduce8(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

float l2sq_f32_scalar(const float* a, const float* b, std::size_t n) {
    float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        for (int j = 0; j < 8; ++j) {
            float d = a[i + j] - b[i + j];
            acc[j] += d * d;
        }
    }
    float sum = reduce8(acc);
    for (; i < n; ++i) {
        float d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

} // namespace robatch::simd::detail

#include "robatch/simd/distance.hpp"

#include <cstdlib>
#include <cstring>

#include "robatch/errors.hpp"

namespace robatch::simd {

namespace detail {
float dot_f32_scalar(const float* a, const float* b, std::size_t n);
float l2sq_f32_scalar(const float* a, const float* b, std::size_t n);
#ifdef ROBATCH_HAVE_AVX2
float dot_f32_avx2(const float* a, const float* b, std::size_t n);
float l2sq_f32_avx2(const float* a, const float* b, std::size_t n);
#endif
} // namespace detail

namespace {

using KernelFn = float (*)(const float*, const float*, std::size_t);

struct Kernels {
    Backend backend;
    KernelFn dot;
    KernelFn l2sq;
};

bool cpu_has_avx2() {
#ifdef ROBATCH_HAVE_AVX2
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Kernels make_kernels(Backend backend) {
#ifdef ROBATCH_HAVE_AVX2
    if (backend == Backend::avx2) return {backend, detail::dot_f32_avx2, detail::l2sq_f32_avx2};
#endif
    return {Backend::scalar, detail::dot_f32_scalar, detail::l2sq_f32_scalar};
}

Backend initial_backend() {
    if (const char* env = std::getenv("ROBATCH_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
        return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Kernels g_kernels = make_kernels(initial_backend());

} // namespace

float dot_f32(const float* a, const float* b, std::size_t n) { return g_kernels.dot(a, b, n); }

float l2sq_f32(const float* a, const float* b, std::size_t n) { return g_kernels.l2sq(a, b, n); }

Backend active_backend() { return g_kernels.backend; }

bool backend_supported(Backend backend) {
    return backend == Backend::scalar || (backend == Backend::avx2 && cpu_has_avx2());
}

const char* backend_name(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend backend) {
    if (!backend_supported(backend))
        throw schema_error(std::string("simd backend '") + backend_name(backend) +
                           "' not supported on this cpu");
    g_kernels = make_kernels(backend);
}

} // namespace robatch::simd

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "robatch/prng.hpp"
#include "robatch/simd/distance.hpp"

using namespace robatch;

namespace {

std::vector<float> random_vec(Prng& rng, std::size_t n) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.normal());
    return v;
}

double dot_ref(const std::vector<float>& a, const std::vector<float>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

double l2sq_ref(const std::vector<float>& a, const std::vector<float>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a[i]) - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

TEST_CASE("kernels match a double-precision reference within float tolerance") {
    Prng rng(3);
    for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 63u, 64u, 257u, 1024u}) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);
        double scale = std::max(1.0, std::abs(dot_ref(a, b)));
        CHECK(std::abs(simd::dot_f32(a.data(), b.data(), n) - dot_ref(a, b)) <=
              1e-4 * scale + 1e-5);
        CHECK(std::abs(simd::l2sq_f32(a.data(), b.data(), n) - l2sq_ref(a, b)) <=
              1e-4 * l2sq_ref(a, b) + 1e-5);
    }
}

TEST_CASE("scalar and avx2 backends produce bit-identical results") {
    if (!simd::backend_supported(simd::Backend::avx2)) {
        MESSAGE("avx2 not available; dispatch equivalence untestable on this machine");
        return;
    }
    Prng rng(5);
    simd::Backend before = simd::active_backend();
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(0, 300));
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);

        simd::force_backend(simd::Backend::scalar);
        float dot_s = simd::dot_f32(a.data(), b.data(), n);
        float l2_s = simd::l2sq_f32(a.data(), b.data(), n);

        simd::force_backend(simd::Backend::avx2);
        float dot_v = simd::dot_f32(a.data(), b.data(), n);
        float l2_v = simd::l2sq_f32(a.data(), b.data(), n);

        CHECK(dot_s == dot_v); // bit-exact: same blocked accumulation order
        CHECK(l2_s == l2_v);
    }
    simd::force_backend(before);
}

TEST_CASE("backend introspection and forcing") {
    CHECK(simd::backend_supported(simd::Backend::scalar));
    CHECK(simd::backend_name(simd::Backend::scalar) == std::string("scalar"));
    simd::Backend before = simd::active_backend();
    simd::force_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    simd::force_backend(before);
}

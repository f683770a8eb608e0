#pragma once

#include <cstddef>

namespace robatch::simd {

/// f32 reduction kernels behind the embedding-distance hot loops (KNN router,
/// k-center coreset). Every backend follows the same contract so results are
/// bit-identical regardless of which one runs:
///   - 8 independent accumulators over full blocks of 8 (lane j sums elements
///     j, j+8, ...), no fma,
///   - fixed reduction tree ((l0+l4)+(l2+l6)) + ((l1+l5)+(l3+l7)),
///   - remaining tail elements added sequentially afterwards.
float dot_f32(const float* a, const float* b, std::size_t n);
float l2sq_f32(const float* a, const float* b, std::size_t n);

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_supported(Backend backend);
const char* backend_name(Backend backend);

/// Overrides the dispatched backend (used by the equivalence tests and the
/// ROBATCH_SIMD=scalar|avx2 env var). Throws if the CPU lacks support.
void force_backend(Backend backend);

} // namespace robatch::simd

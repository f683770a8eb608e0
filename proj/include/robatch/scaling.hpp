#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace robatch {

/// Model-specific relative utility decay under batching. Evaluates to exactly
/// 1 at b=1 and is clamped to [0, 1] everywhere.
struct ScalingFn {
    enum class Kind { constant, piecewise_linear, power_law };

    Kind kind = Kind::constant;
    /// (batch size, utility ratio vs b=1); sorted strictly increasing in b,
    /// first knot is (1, 1). piecewise_linear only.
    std::vector<std::pair<std::int32_t, double>> knots;
    /// power_law only: 1 - alpha * (b - 1)^beta.
    double alpha = 0.0;
    double beta = 1.0;

    static ScalingFn constant() { return ScalingFn{}; }

    double operator()(std::int32_t batch) const;
};

/// Per-batch-size mean utility observed on the calibration coreset.
struct UtilitySample {
    std::int32_t batch = 1;
    double mean_utility = 0.0;
};

/// Interpolating fit: knot ratios are the sampled ratios u(b)/u(1) exactly;
/// between knots the ratio is linearly interpolated; beyond the last knot it
/// is held constant. Samples must be sorted strictly increasing in b and
/// include b=1 with positive utility.
ScalingFn fit_scaling_piecewise(const std::vector<UtilitySample>& samples);

/// Least-squares fit of 1 - alpha*(b-1)^beta to the ratios u(b)/u(1), done in
/// the log domain over b > 1. Needs at least 3 samples including b=1.
/// Degenerate inputs (no decay anywhere) give the constant function.
ScalingFn fit_scaling_power_law(const std::vector<UtilitySample>& samples);

} // namespace robatch

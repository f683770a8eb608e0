#pragma once

#include <functional>
#include <span>
#include <vector>

#include "robatch/cost.hpp"
#include "robatch/money.hpp"
#include "robatch/scaling.hpp"
#include "robatch/types.hpp"

namespace robatch {

/// Result of probing one (model, batch size) configuration on the coreset.
struct ProbeResult {
    std::vector<double> utilities; // per coreset query, in [0, 1]
    Money cost;                    // realized invocation cost of the probe batches
};

/// Boundary to whatever evaluates batched utility (an LLM pool in production,
/// the planted-world simulator here). Must be deterministic per
/// (model, batch, coreset, world seed).
class BatchUtilityProbe {
  public:
    virtual ~BatchUtilityProbe() = default;
    virtual ProbeResult run(std::int32_t model_index, std::int32_t batch,
                            std::span<const Query> coreset) const = 0;
};

struct RcuSample {
    std::int32_t batch = 1;
    double mean_utility = 0.0;
    double rcu = 0.0; // batch cost per unit mean utility, (C_sys + b*E[C_q]) / u
};

struct ModelCalibration {
    std::string model_id;
    std::int32_t b_max = 1;
    std::vector<std::int32_t> batch_grid; // candidate grid intersected with [1, b_max]
    std::int32_t effective_batch_size = 1;
    ScalingFn scaling;
    std::vector<RcuSample> rcu_samples; // probe sample log, ascending in batch
    Money probe_spend;
};

struct CalibrationProfile {
    double epsilon = 0.01;
    std::vector<ModelCalibration> models;

    void validate() const;
};

struct CalibrationOptions {
    double epsilon = 0.01;
    std::size_t coreset_size = 256;
    bool exhaustive_scan = false;
    bool power_law_scaling = false; // default is piecewise-linear interpolation
};

/// Greedy k-center selection of m indices. The first center is the point
/// farthest from the centroid; each next center maximizes the distance to its
/// nearest chosen center. Distance ties break toward the lowest index. The
/// seed is part of the contract but unused: the seeding rule leaves no
/// randomness.
std::vector<std::size_t> k_center_coreset(std::span<const std::vector<float>> embeddings,
                                          std::size_t m, std::uint64_t seed);

/// Largest batch size at which the system prompt still accounts for at least
/// an epsilon fraction of the batched prompt cost:
/// ceil(C_sys * (1 - eps) / (eps * E[C_q])), floored at 1. Exact integer
/// arithmetic (epsilon on the 1e-6 grid).
std::int32_t max_batch_size(const ModelSpec& model, Money expected_query_cost, double epsilon);

/// Same bound with the expectation kept as an exact ratio sum/count.
std::int32_t max_batch_size_mean(const ModelSpec& model, Money total_query_cost,
                                 std::int64_t count, double epsilon);

/// Monetary cost of one batch of size b per unit of mean utility:
/// (C_sys + b * mean_query_cost) / mean_utility. Throws on utility collapse
/// (mean_utility <= 0).
double rcu(const ModelSpec& model, std::int32_t b, Money mean_query_cost, double mean_utility);

/// Exact comparison key for the calibration criterion (the amortized
/// per-query cost per unit utility, rcu(b)/b). den == 0 encodes +infinity
/// (utility collapse), ordered worse than any finite value.
struct RcuKey {
    int128 num = 0;
    int128 den = 0;
};

int compare_rcu(const RcuKey& a, const RcuKey& b);

/// Discrete minimizer over candidate indices 0..n-1. Ternary search assuming
/// a unimodal ('V'-shaped) sequence, falling back to a linear scan once the
/// remaining interval has at most 4 candidates; exhaustive_scan forces a full
/// scan. The evaluator is memoized; on non-unimodal input without the scan
/// flag the result is a local minimum. Ties resolve to the lowest index.
std::size_t discrete_unimodal_argmin(std::size_t n,
                                     const std::function<RcuKey(std::size_t)>& eval,
                                     bool exhaustive_scan);

struct EffectiveBatchResult {
    std::int32_t b_max = 1;
    std::vector<std::int32_t> grid; // candidate grid actually searched
    std::int32_t b_effect = 1;
    std::vector<RcuSample> samples;         // evaluated points, ascending in batch
    std::vector<UtilitySample> utility_samples; // same points (for the scaling fit)
    Money probe_spend;
};

/// Calibrates the effective batch size for one model: computes b_max from the
/// coreset mean query cost, searches model.batch_grid intersected with
/// [1, b_max] for the minimum-RCU batch size (b=1 is always evaluated), and
/// returns every evaluated sample. Coreset batches are formed sequentially in
/// coreset order.
EffectiveBatchResult calibrate_effective_batch(const ModelSpec& model, std::int32_t model_index,
                                               std::span<const Query> coreset,
                                               const BatchUtilityProbe& probe, double epsilon,
                                               bool exhaustive_scan = false);

/// Full modeling pass: k-center coreset over the training embeddings, then
/// per-model b_max, effective-batch search, and scaling fit.
CalibrationProfile calibrate_pool(const ModelPool& pool, std::span<const Query> training,
                                  const BatchUtilityProbe& probe,
                                  const CalibrationOptions& options);

/// Returns a copy of the pool with the calibrated grid, effective batch size
/// and scaling function applied to each model.
ModelPool apply_profile(const ModelPool& pool, const CalibrationProfile& profile);

} // namespace robatch

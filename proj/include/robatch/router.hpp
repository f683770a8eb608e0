#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "robatch/scaling.hpp"
#include "robatch/types.hpp"

namespace robatch {

enum class RouterMetric { cosine, euclidean };

/// K-nearest-neighbor multi-label estimator of per-model unbatched utility.
/// A lazy learner: training stores the labeled embeddings, prediction averages
/// the label vectors of the k nearest training points. Immutable after
/// training; predictions are pure.
class Router {
  public:
    /// Every training query must carry truth_utilities of a common length K.
    static Router train(std::span<const Query> training, std::size_t k_neighbors,
                        RouterMetric metric);

    /// Used by deserialization; validates shapes.
    static Router from_parts(std::vector<float> embeddings, std::size_t dim,
                             std::vector<std::uint8_t> labels, std::size_t num_models,
                             std::size_t k_neighbors, RouterMetric metric);

    /// Per-model mean of the k nearest label vectors; entries in [0, 1].
    /// Distance ties break toward the lowest training index.
    std::vector<double> estimate_unbatched_utility(std::span<const float> embedding) const;

    std::size_t dim() const { return dim_; }
    std::size_t num_models() const { return num_models_; }
    std::size_t training_size() const { return rows_; }
    std::size_t k_neighbors() const { return k_; }
    RouterMetric metric() const { return metric_; }
    std::span<const float> embeddings() const { return embeddings_; }
    std::span<const std::uint8_t> labels() const { return labels_; }

  private:
    Router() = default;

    std::vector<float> embeddings_;    // rows_ x dim_, row-major
    std::vector<float> norms_;         // per-row Euclidean norm (cosine metric)
    std::vector<std::uint8_t> labels_; // rows_ x num_models_
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::size_t num_models_ = 0;
    std::size_t k_ = 1;
    RouterMetric metric_ = RouterMetric::cosine;
};

/// Batch-aware proxy utility: the unbatched estimate scaled by the model's
/// relative decay at batch size b. Stays in [0, 1].
double proxy_utility(double u1, const ScalingFn& scaling, std::int32_t b);

} // namespace robatch

#include "robatch/router.hpp"

#include <algorithm>
#include <cmath>

#include "robatch/errors.hpp"
#include "robatch/simd/distance.hpp"

namespace robatch {

Router Router::train(std::span<const Query> training, std::size_t k_neighbors,
                     RouterMetric metric) {
    if (training.empty()) throw schema_error("router training set is empty");
    if (k_neighbors < 1 || k_neighbors > training.size())
        throw schema_error("router k_neighbors=" + std::to_string(k_neighbors) +
                           " out of range [1, " + std::to_string(training.size()) + "]");
    std::size_t dim = training[0].embedding.size();
    if (dim == 0) throw schema_error("router training embeddings are empty");
    if (!training[0].truth_utilities)
        throw schema_error("training labels required: query '" + training[0].id +
                           "' has no truth_utilities");
    std::size_t num_models = training[0].truth_utilities->size();

    std::vector<float> embeddings;
    embeddings.reserve(training.size() * dim);
    std::vector<std::uint8_t> labels;
    labels.reserve(training.size() * num_models);
    for (const Query& q : training) {
        if (q.embedding.size() != dim)
            throw schema_error("query '" + q.id + "': embedding dimension mismatch");
        if (!q.truth_utilities)
            throw schema_error("training labels required: query '" + q.id +
                               "' has no truth_utilities");
        if (q.truth_utilities->size() != num_models)
            throw schema_error("query '" + q.id + "': truth_utilities length mismatch");
        embeddings.insert(embeddings.end(), q.embedding.begin(), q.embedding.end());
        labels.insert(labels.end(), q.truth_utilities->begin(), q.truth_utilities->end());
    }
    return from_parts(std::move(embeddings), dim, std::move(labels), num_models, k_neighbors,
                      metric);
}

Router Router::from_parts(std::vector<float> embeddings, std::size_t dim,
                          std::vector<std::uint8_t> labels, std::size_t num_models,
                          std::size_t k_neighbors, RouterMetric metric) {
    if (dim == 0 || num_models == 0 || embeddings.size() % dim != 0)
        throw schema_error("router: inconsistent embedding matrix");
    std::size_t rows = embeddings.size() / dim;
    if (rows == 0 || labels.size() != rows * num_models)
        throw schema_error("router: label matrix does not match embedding rows");
    if (k_neighbors < 1 || k_neighbors > rows)
        throw schema_error("router: k_neighbors out of range");

    Router r;
    r.embeddings_ = std::move(embeddings);
    r.labels_ = std::move(labels);
    r.rows_ = rows;
    r.dim_ = dim;
    r.num_models_ = num_models;
    r.k_ = k_neighbors;
    r.metric_ = metric;
    if (metric == RouterMetric::cosine) {
        r.norms_.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const float* row = r.embeddings_.data() + i * dim;
            r.norms_[i] = std::sqrt(simd::dot_f32(row, row, dim));
        }
    }
    return r;
}

std::vector<double> Router::estimate_unbatched_utility(std::span<const float> embedding) const {
    if (embedding.size() != dim_)
        throw schema_error("router: query embedding dimension " +
                           std::to_string(embedding.size()) + " != " + std::to_string(dim_));

    double query_norm = 0.0;
    if (metric_ == RouterMetric::cosine)
        query_norm = std::sqrt(
            static_cast<double>(simd::dot_f32(embedding.data(), embedding.data(), dim_)));

    std::vector<std::pair<double, std::size_t>> ranked(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const float* row = embeddings_.data() + i * dim_;
        double d;
        if (metric_ == RouterMetric::euclidean) {
            d = simd::l2sq_f32(embedding.data(), row, dim_);
        } else {
            double denom = query_norm * norms_[i];
            // Zero-norm vectors carry no direction; treat them as orthogonal.
            d = denom == 0.0 ? 1.0
                             : 1.0 - simd::dot_f32(embedding.data(), row, dim_) / denom;
        }
        ranked[i] = {d, i};
    }
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k_),
                      ranked.end());

    std::vector<double> out(num_models_, 0.0);
    for (std::size_t j = 0; j < k_; ++j) {
        const std::uint8_t* row = labels_.data() + ranked[j].second * num_models_;
        for (std::size_t k = 0; k < num_models_; ++k) out[k] += row[k];
    }
    for (double& v : out) v /= static_cast<double>(k_);
    return out;
}

double proxy_utility(double u1, const ScalingFn& scaling, std::int32_t b) {
    if (u1 < 0.0 || u1 > 1.0) throw schema_error("proxy_utility: u1 must lie in [0,1]");
    if (b < 1) throw schema_error("proxy_utility: batch size must be >= 1");
    return u1 * scaling(b);
}

} // namespace robatch

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robatch/money.hpp"
#include "robatch/scaling.hpp"

namespace robatch {

/// One LLM: pricing, system-prompt length, candidate batch sizes, and the
/// calibrated batching behaviour (effective batch size + utility scaling).
struct ModelSpec {
    std::string id;
    Money input_price;  // per input token
    Money output_price; // per output token
    std::int64_t system_prompt_tokens = 0;
    /// Candidate batch sizes, strictly increasing, first element 1.
    std::vector<std::int32_t> batch_grid{1};
    /// Largest batch size the scheduler may use; set by calibration.
    std::int32_t effective_batch_size = 1;
    ScalingFn scaling = ScalingFn::constant();

    void validate() const;
};

/// One workload item. Embeddings are opaque input vectors; token counts are
/// supplied, not estimated. truth_utilities (per-model 0/1 at b=1) are only
/// present on training/simulation queries.
struct Query {
    std::string id;
    std::vector<float> embedding;
    std::int64_t input_tokens = 1;
    std::int64_t expected_output_tokens = 1;
    std::optional<std::vector<std::uint8_t>> truth_utilities;

    void validate(std::size_t dim, std::size_t num_models) const;
};

/// The atomic routing decision: (model, batch size). model_index is 1-based.
struct State {
    std::int32_t model_index = 1;
    std::int32_t batch_size = 1;

    friend bool operator==(const State& a, const State& b) {
        return a.model_index == b.model_index && a.batch_size == b.batch_size;
    }
};

/// Ordered model pool; models must be simultaneously strictly ascending in
/// input and output price (cheapest first). Pools violating this are
/// rejected at load time.
struct ModelPool {
    std::vector<ModelSpec> models;

    std::size_t size() const { return models.size(); }
    const ModelSpec& model(std::int32_t index_1based) const;

    void validate() const;
    /// Checks a state against the pool: grid membership and the calibrated
    /// effective-batch-size cap.
    void validate_state(const State& state) const;
};

} // namespace robatch

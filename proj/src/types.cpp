#include "robatch/types.hpp"

#include <algorithm>

#include "robatch/errors.hpp"

namespace robatch {

void ModelSpec::validate() const {
    if (id.empty()) throw schema_error("model id must not be empty");
    if (input_price.is_negative() || output_price.is_negative())
        throw schema_error("model '" + id + "': prices must be nonnegative");
    if (system_prompt_tokens < 0)
        throw schema_error("model '" + id + "': system_prompt_tokens must be nonnegative");
    if (batch_grid.empty() || batch_grid.front() != 1)
        throw schema_error("model '" + id + "': batch grid must start at 1");
    for (std::size_t i = 1; i < batch_grid.size(); ++i) {
        if (batch_grid[i] <= batch_grid[i - 1])
            throw schema_error("model '" + id + "': batch grid must be strictly increasing");
    }
    if (std::find(batch_grid.begin(), batch_grid.end(), effective_batch_size) == batch_grid.end())
        throw schema_error("model '" + id + "': effective batch size " +
                           std::to_string(effective_batch_size) + " is not in the batch grid");
}

void Query::validate(std::size_t dim, std::size_t num_models) const {
    if (id.empty()) throw schema_error("query id must not be empty");
    if (embedding.size() != dim)
        throw schema_error("query '" + id + "': embedding dimension " +
                           std::to_string(embedding.size()) + " != workload dimension " +
                           std::to_string(dim));
    if (input_tokens < 1)
        throw schema_error("query '" + id + "': input_tokens must be >= 1");
    if (expected_output_tokens < 1)
        throw schema_error("query '" + id + "': expected_output_tokens must be >= 1");
    if (truth_utilities) {
        if (truth_utilities->size() != num_models)
            throw schema_error("query '" + id + "': truth_utilities length " +
                               std::to_string(truth_utilities->size()) + " != pool size " +
                               std::to_string(num_models));
        for (auto v : *truth_utilities) {
            if (v > 1) throw schema_error("query '" + id + "': truth utilities must be 0 or 1");
        }
    }
}

const ModelSpec& ModelPool::model(std::int32_t index_1based) const {
    if (index_1based < 1 || static_cast<std::size_t>(index_1based) > models.size())
        throw schema_error("model index " + std::to_string(index_1based) + " out of range [1, " +
                           std::to_string(models.size()) + "]");
    return models[static_cast<std::size_t>(index_1based) - 1];
}

void ModelPool::validate() const {
    if (models.empty()) throw schema_error("model pool must not be empty");
    for (const auto& m : models) m.validate();
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = i + 1; j < models.size(); ++j)
            if (models[i].id == models[j].id)
                throw schema_error("duplicate model id '" + models[i].id + "'");
    for (std::size_t i = 1; i < models.size(); ++i) {
        // Cheapest-first ordering in both prices simultaneously; the greedy
        // initialization at the first model relies on it.
        if (!(models[i - 1].input_price < models[i].input_price &&
              models[i - 1].output_price < models[i].output_price))
            throw schema_error("model pool must be strictly ascending in both input and output "
                               "price ('" + models[i - 1].id + "' vs '" + models[i].id + "')");
    }
}

void ModelPool::validate_state(const State& state) const {
    const ModelSpec& m = model(state.model_index);
    if (std::find(m.batch_grid.begin(), m.batch_grid.end(), state.batch_size) ==
        m.batch_grid.end())
        throw schema_error("state (" + m.id + ", " + std::to_string(state.batch_size) +
                           "): batch size not in the model's grid");
    if (state.batch_size > m.effective_batch_size)
        throw schema_error("state (" + m.id + ", " + std::to_string(state.batch_size) +
                           "): batch size exceeds the calibrated effective batch size " +
                           std::to_string(m.effective_batch_size));
}

} // namespace robatch

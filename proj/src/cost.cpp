#include "robatch/cost.hpp"

namespace robatch {

Money system_prompt_cost(const ModelSpec& model) {
    return model.input_price * model.system_prompt_tokens;
}

Money query_cost(const Query& query, const ModelSpec& model) {
    return model.input_price * query.input_tokens +
           model.output_price * query.expected_output_tokens;
}

StateCost amortized_state_cost(const Query& query, const State& state, const ModelPool& pool) {
    const ModelSpec& m = pool.model(state.model_index);
    return StateCost{query_cost(query, m), system_prompt_cost(m), state.batch_size};
}

Money batch_group_cost(const ModelSpec& model, std::int32_t b, std::span<const Query> queries) {
    if (queries.empty()) return Money{};
    if (b < 1) throw schema_error("batch size must be >= 1");
    std::int64_t n = static_cast<std::int64_t>(queries.size());
    std::int64_t invocations = (n + b - 1) / b;
    Money total = system_prompt_cost(model) * invocations;
    for (const Query& q : queries) total += query_cost(q, model);
    return total;
}

} // namespace robatch

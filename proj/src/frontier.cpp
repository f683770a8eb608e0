#include "robatch/frontier.hpp"

#include <algorithm>

#include "robatch/router.hpp"

namespace robatch {

std::vector<State> candidate_states(const ModelPool& pool) {
    std::vector<State> states;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const ModelSpec& m = pool.models[k];
        for (std::int32_t b : m.batch_grid) {
            if (b > m.effective_batch_size) break;
            states.push_back(State{static_cast<std::int32_t>(k + 1), b});
        }
    }
    return states;
}

bool dominates(const FrontierEntry& a, const FrontierEntry& b) {
    return a.cost <= b.cost && a.utility >= b.utility;
}

namespace {

bool candidate_order(const FrontierEntry& a, const FrontierEntry& b) {
    int c = StateCost::compare(a.cost, b.cost);
    if (c != 0) return c < 0;
    if (a.utility != b.utility) return a.utility > b.utility;
    if (a.state.model_index != b.state.model_index)
        return a.state.model_index < b.state.model_index;
    return a.state.batch_size > b.state.batch_size;
}

} // namespace

Frontier build_frontier(std::string query_id, std::vector<FrontierEntry> candidates) {
    if (candidates.empty())
        throw schema_error("query '" + query_id + "': no candidate states");
    std::sort(candidates.begin(), candidates.end(), candidate_order);

    Frontier f;
    f.query_id = std::move(query_id);
    for (FrontierEntry& e : candidates) {
        if (f.entries.empty() || e.utility > f.entries.back().utility)
            f.entries.push_back(std::move(e));
    }
    return f;
}

Frontier build_frontier(const Query& query, std::span<const State> states,
                        std::span<const double> unbatched_utilities, const ModelPool& pool) {
    if (unbatched_utilities.size() != pool.size())
        throw schema_error("query '" + query.id + "': expected " + std::to_string(pool.size()) +
                           " unbatched utilities, got " +
                           std::to_string(unbatched_utilities.size()));
    std::vector<FrontierEntry> candidates;
    candidates.reserve(states.size());
    for (const State& s : states) {
        const ModelSpec& m = pool.model(s.model_index);
        double u = proxy_utility(unbatched_utilities[static_cast<std::size_t>(s.model_index - 1)],
                                 m.scaling, s.batch_size);
        candidates.push_back(FrontierEntry{s, amortized_state_cost(query, s, pool),
                                           utility_from_double(u)});
    }
    return build_frontier(query.id, std::move(candidates));
}

std::vector<FrontierEntry> non_dominated_reference(std::vector<FrontierEntry> candidates) {
    // Pairwise dominance with Def.-2 semantics; equal points are mutually
    // dominating, so keep the preferred representative (lower model index,
    // then larger batch) of each equal group.
    std::vector<FrontierEntry> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < candidates.size() && !drop; ++j) {
            if (i == j) continue;
            const FrontierEntry& a = candidates[j];
            const FrontierEntry& b = candidates[i];
            if (!dominates(a, b)) continue;
            if (dominates(b, a)) {
                // Equal cost and utility: only the preferred one survives
                // (lower model index, then larger batch, then first listed).
                auto rank = [](const FrontierEntry& e) {
                    return std::make_pair(e.state.model_index, -e.state.batch_size);
                };
                if (rank(a) < rank(b) || (rank(a) == rank(b) && j < i)) drop = true;
            } else {
                drop = true;
            }
        }
        if (!drop) kept.push_back(candidates[i]);
    }
    std::sort(kept.begin(), kept.end(), candidate_order);
    return kept;
}

} // namespace robatch

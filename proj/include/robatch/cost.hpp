#pragma once

#include <span>

#include "robatch/money.hpp"
#include "robatch/types.hpp"

namespace robatch {

/// Amortized per-query cost of serving a query in some state, kept in exact
/// component form: value = query_part + sys_part / batch. The division is not
/// closed over micro-units, so the quotient is never materialized; all
/// comparisons and sums cross-multiply instead.
struct StateCost {
    Money query_part; // t_in*c_in + t_out*c_out, or a raw externally-given cost
    Money sys_part;   // t_sys*c_in share to amortize (0 for raw costs)
    std::int32_t batch = 1;

    static StateCost raw(Money value) { return StateCost{value, Money{}, 1}; }

    double to_double() const {
        return query_part.to_double() + sys_part.to_double() / batch;
    }

    /// Exact value in integer ticks of 1/(scale * 1e6) money units.
    /// scale must be a multiple of batch.
    int128 ticks(std::int64_t scale) const {
        return static_cast<int128>(query_part.micro()) * scale +
               static_cast<int128>(sys_part.micro()) * (scale / batch);
    }

    /// Smallest money value on the micro grid that is >= this cost.
    Money ceil_to_micro() const {
        int128 num = static_cast<int128>(query_part.micro()) * batch + sys_part.micro();
        int128 micro = (num + batch - 1) / batch;
        return Money::from_micro(static_cast<std::int64_t>(micro));
    }

    /// Three-way exact comparison of the represented values.
    static int compare(const StateCost& a, const StateCost& b) {
        // (qa + sa/ba) vs (qb + sb/bb)  <=>  (qa*ba + sa)*bb vs (qb*bb + sb)*ba
        int128 lhs = (static_cast<int128>(a.query_part.micro()) * a.batch + a.sys_part.micro()) *
                     b.batch;
        int128 rhs = (static_cast<int128>(b.query_part.micro()) * b.batch + b.sys_part.micro()) *
                     a.batch;
        if (lhs < rhs) return -1;
        if (lhs > rhs) return 1;
        return 0;
    }

    friend bool operator==(const StateCost& a, const StateCost& b) { return compare(a, b) == 0; }
    friend bool operator<(const StateCost& a, const StateCost& b) { return compare(a, b) < 0; }
    friend bool operator<=(const StateCost& a, const StateCost& b) { return compare(a, b) <= 0; }
    friend bool operator>(const StateCost& a, const StateCost& b) { return compare(a, b) > 0; }
    friend bool operator>=(const StateCost& a, const StateCost& b) { return compare(a, b) >= 0; }
};

/// Fixed cost of one invocation's system prompt: t_sys * c_in.
Money system_prompt_cost(const ModelSpec& model);

/// Cost incurred purely by the query: t_in * c_in + t_out * c_out.
Money query_cost(const Query& query, const ModelSpec& model);

/// Per-query amortized cost of a state: system_prompt_cost/b + query_cost.
StateCost amortized_state_cost(const Query& query, const State& state, const ModelPool& pool);

/// Total cost of serving `queries` on `model` grouped at batch size b:
/// ceil(n/b) system prompts plus every query's own cost. Empty -> 0.
Money batch_group_cost(const ModelSpec& model, std::int32_t b, std::span<const Query> queries);

} // namespace robatch

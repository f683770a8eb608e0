#pragma once

#include <span>
#include <string>
#include <vector>

#include "robatch/cost.hpp"
#include "robatch/types.hpp"

namespace robatch {

/// A non-dominated state of one query with its amortized per-query cost and
/// proxy utility.
struct FrontierEntry {
    State state;
    StateCost cost;
    UtilityMicro utility = 0;
};

/// The sorted Pareto frontier of one query: entries strictly increasing in
/// both cost and utility.
struct Frontier {
    std::string query_id;
    std::vector<FrontierEntry> entries;
};

/// All states the scheduler may assign: for each model, every grid batch size
/// up to its calibrated effective batch size (1 included).
std::vector<State> candidate_states(const ModelPool& pool);

/// Dominance: a dominates b iff a is no more expensive and no less useful.
/// Non-strict on both sides, so equal points dominate each other.
bool dominates(const FrontierEntry& a, const FrontierEntry& b);

/// Core pruning step over explicit candidate entries: sorts ascending by cost
/// (ties: higher utility, then lower model index, then larger batch size) and
/// keeps an entry iff its utility strictly exceeds every kept predecessor's.
/// The result is strictly increasing in cost and utility, collapses equal
/// points to one representative, and is invariant to the input order.
Frontier build_frontier(std::string query_id, std::vector<FrontierEntry> candidates);

/// Pipeline form: evaluates every candidate state's amortized cost and proxy
/// utility for one query. unbatched_utilities holds the router estimate per
/// model (index 0 = model 1).
Frontier build_frontier(const Query& query, std::span<const State> states,
                        std::span<const double> unbatched_utilities, const ModelPool& pool);

/// Brute-force O(n^2) non-dominated set with the same equal-point dedup rule;
/// test oracle for build_frontier.
std::vector<FrontierEntry> non_dominated_reference(std::vector<FrontierEntry> candidates);

} // namespace robatch

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robatch/cost.hpp"
#include "robatch/frontier.hpp"
#include "robatch/money.hpp"
#include "robatch/types.hpp"

namespace robatch {

/// How the oracle charges an assignment: the sum of per-query amortized costs
/// (the scheduler's own objective space) or the realized grouped cost with
/// ceiling slack per (model, batch) group.
enum class CostMode { amortized, exact_eq4 };

/// Small instance solvable by exhaustive enumeration. Options carry the cost
/// components so both modes can be evaluated.
struct ExactInstance {
    struct Option {
        State state;
        StateCost cost; // query_part + sys_part / batch
        UtilityMicro utility = 0;
    };
    struct QueryStates {
        std::string id;
        std::vector<Option> options;
    };

    std::vector<QueryStates> queries;
    Money budget;
    CostMode mode = CostMode::amortized;
    std::uint64_t enumeration_cap = 5'000'000;
};

struct ExactSolution {
    UtilityMicro utility = 0;
    std::vector<std::size_t> choice; // option index per query, lexicographically smallest optimum
};

/// Enumerates every assignment (mixed-radix, query-major) with budget pruning
/// and returns the maximum total utility plus its lexicographically smallest
/// witness. Throws oracle_cap when the assignment count exceeds the cap and
/// budget_infeasible when no assignment fits the budget.
ExactSolution exact_solve(const ExactInstance& instance);

/// Maximum-coverage instance: pick at most budget sets to cover the most
/// elements. Elements are 1-based ids 1..n.
struct MCInstance {
    std::int64_t n = 0;
    std::vector<std::vector<std::int64_t>> sets;
    std::int64_t budget = 0;

    void validate() const;
};

/// Builds the routing instance whose optimum equals the max-coverage optimum:
/// one model per set with batch-size space {n}, unit system-prompt cost, zero
/// query cost, utility 1 iff the element belongs to the set, budget B, and
/// exact_eq4 cost accounting (the cost of an assignment is the number of used
/// models). Requires budget >= 1; at budget 0 the routing side has no feasible
/// assignment at all.
ExactInstance reduce_max_coverage(const MCInstance& mc);

/// Direct subset enumeration (K <= 20): the most elements coverable with at
/// most `budget` sets.
std::int64_t brute_force_max_coverage(const MCInstance& mc);

/// Convenience: an ExactInstance over the given frontiers (amortized mode),
/// used to compare the greedy result against the exact optimum.
ExactInstance instance_from_frontiers(std::span<const Frontier> frontiers, Money budget,
                                      std::uint64_t cap = 5'000'000);

} // namespace robatch

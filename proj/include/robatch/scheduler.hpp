#pragma once

#include <span>
#include <string>
#include <vector>

#include "robatch/frontier.hpp"
#include "robatch/money.hpp"
#include "robatch/types.hpp"

namespace robatch {

/// One committed upgrade in the scheduling trace.
struct TraceRow {
    int step = 0;
    std::string query_id;
    State state;
    double delta = 0.0;  // utility gain per unit cost of the committed upgrade
    int128 budget_after_ticks = 0;
};

/// An upgrade popped from the priority queue but skipped because its
/// incremental cost exceeded the remaining budget. Dropped, not re-queued.
struct SkippedUpgrade {
    std::string query_id;
    State state;
    std::string reason;
};

/// PQ contents captured after a step, sorted by priority (head first).
struct PqSnapshotEntry {
    std::string query_id;
    State state;
    double delta = 0.0;
};

struct Assignment {
    /// Chosen frontier entry index per query, aligned with the input order.
    std::vector<std::size_t> chosen;
    std::vector<std::string> query_ids;
    std::vector<State> states;

    /// Budgets in integer ticks of 1/(tick_scale * 1e6) money units.
    std::int64_t tick_scale = 1;
    int128 initial_remaining_ticks = 0;
    int128 remaining_ticks = 0;

    UtilityMicro total_proxy_utility = 0;
    std::vector<TraceRow> trace;
    std::vector<SkippedUpgrade> skipped_upgrades;
    std::vector<std::vector<PqSnapshotEntry>> pq_snapshots; // only when recorded

    /// Tick value as money, exact when representable on the money grid,
    /// nearest micro-unit otherwise (display only).
    Money ticks_to_money(int128 ticks) const;
    Money initial_remaining_budget() const { return ticks_to_money(initial_remaining_ticks); }
    Money remaining_budget() const { return ticks_to_money(remaining_ticks); }
};

struct ScheduleOptions {
    /// Capture the sorted PQ after initialization and after every commit
    /// (diagnostics / golden tests; costs memory on large runs).
    bool record_pq_snapshots = false;
};

/// Utility gain per unit cost between consecutive frontier entries t-1 -> t.
double delta_slope(const Frontier& frontier, std::size_t t);

/// Greedy scheduling: start every query at its cheapest frontier entry, then
/// repeatedly commit the pending upgrade with the highest utility gain per
/// unit cost until the queue empties or the budget is exhausted. Upgrades
/// whose incremental cost exceeds the remaining budget are skipped and never
/// re-queued. Priority ties break toward the earlier query in workload order.
/// Throws budget_infeasible if the initial assignment alone exceeds budget.
Assignment greedy_schedule(std::span<const Frontier> frontiers, Money budget,
                           const ScheduleOptions& options = {});

/// One physical invocation: at most batch_size members, all assigned
/// (model_index, batch_size).
struct InvocationBatch {
    std::int32_t model_index = 1;
    std::int32_t batch_size = 1;
    std::vector<std::size_t> query_indices; // into the scheduling input order
    std::vector<std::string> query_ids;
};

/// Groups assigned queries per (model, batch size) in workload order and cuts
/// them into ceil(n/b) invocations; the last one may be partial.
std::vector<InvocationBatch> pack_batches(const Assignment& assignment);

/// Realized total cost of the packed invocations: one system prompt per
/// invocation plus every member query's own cost. Exceeds the amortized spend
/// exactly when some group is partially filled.
Money exact_spend(std::span<const InvocationBatch> batches, const ModelPool& pool,
                  std::span<const Query> queries);

} // namespace robatch

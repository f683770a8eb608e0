#include "robatch/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace robatch {

namespace {

constexpr std::int64_t kMaxTickScale = std::int64_t{1} << 40;

// Kept to 24 bytes: the priority queue is the scheduler's hot data structure
// and its heap swaps dominate the runtime on large workloads.
struct PqEntry {
    std::int64_t cost_ticks = 0; // cost[target] - cost[target-1], > 0
    std::uint32_t query = 0;     // position in the frontiers span
    std::uint32_t target = 0;    // frontier entry index being offered
    std::int32_t gain = 0;       // utility[target] - utility[target-1]
};

// Max-heap order on delta = gain / cost, exact by cross-multiplication;
// ties toward the earlier query (workload order). Returns true when a is
// worse than b.
struct PqWorse {
    bool operator()(const PqEntry& a, const PqEntry& b) const {
        int128 lhs = static_cast<int128>(a.gain) * b.cost_ticks;
        int128 rhs = static_cast<int128>(b.gain) * a.cost_ticks;
        if (lhs != rhs) return lhs < rhs;
        return a.query > b.query;
    }
};

std::int64_t entry_ticks_i64(const StateCost& cost, std::int64_t scale) {
    int128 t = cost.ticks(scale);
    if (t > std::numeric_limits<std::int64_t>::max() ||
        t < std::numeric_limits<std::int64_t>::min())
        throw schema_error("state cost too large for exact budget accounting");
    return static_cast<std::int64_t>(t);
}

} // namespace

Money Assignment::ticks_to_money(int128 ticks) const {
    int128 micro = ticks / tick_scale;
    if (micro * tick_scale != ticks) {
        // Not on the micro grid; round half away from zero for display.
        int128 rem = ticks % tick_scale;
        int128 twice = (rem < 0 ? -rem : rem) * 2;
        if (twice >= tick_scale) micro += ticks < 0 ? -1 : 1;
    }
    return Money::from_micro(static_cast<std::int64_t>(micro));
}

double delta_slope(const Frontier& frontier, std::size_t t) {
    if (t < 1 || t >= frontier.entries.size())
        throw schema_error("delta_slope: index " + std::to_string(t) + " out of range [1, " +
                           std::to_string(frontier.entries.size()) + ")");
    const FrontierEntry& prev = frontier.entries[t - 1];
    const FrontierEntry& cur = frontier.entries[t];
    double du = utility_to_double(cur.utility - prev.utility);
    double dc = cur.cost.to_double() - prev.cost.to_double();
    return du / dc;
}

Assignment greedy_schedule(std::span<const Frontier> frontiers, Money budget,
                           const ScheduleOptions& options) {
    Assignment out;
    out.query_ids.reserve(frontiers.size());

    std::int64_t scale = 1;
    for (const Frontier& f : frontiers) {
        if (f.entries.empty()) throw schema_error("query '" + f.query_id + "': empty frontier");
        for (std::size_t t = 0; t < f.entries.size(); ++t) {
            scale = checked_lcm(scale, f.entries[t].cost.batch, kMaxTickScale);
            if (f.entries[t].utility < 0 || f.entries[t].utility > kUtilityScale)
                throw schema_error("query '" + f.query_id + "': utility outside [0, 1]");
            if (t == 0 && f.entries[0].cost < StateCost{})
                throw schema_error("query '" + f.query_id + "': negative state cost");
            if (t > 0) {
                if (!(f.entries[t - 1].cost < f.entries[t].cost) ||
                    f.entries[t - 1].utility >= f.entries[t].utility)
                    throw schema_error("query '" + f.query_id +
                                       "': frontier must strictly increase in cost and utility");
            }
        }
    }
    out.tick_scale = scale;

    int128 remaining = static_cast<int128>(budget.micro()) * scale;
    std::vector<PqEntry> heap;
    heap.reserve(frontiers.size());

    for (std::size_t i = 0; i < frontiers.size(); ++i) {
        const Frontier& f = frontiers[i];
        out.query_ids.push_back(f.query_id);
        out.chosen.push_back(0);
        remaining -= f.entries[0].cost.ticks(scale);
        out.total_proxy_utility += f.entries[0].utility;
        if (f.entries.size() > 1) {
            PqEntry e;
            e.query = static_cast<std::uint32_t>(i);
            e.target = 1;
            e.gain = static_cast<std::int32_t>(f.entries[1].utility - f.entries[0].utility);
            e.cost_ticks =
                entry_ticks_i64(f.entries[1].cost, scale) - entry_ticks_i64(f.entries[0].cost, scale);
            heap.push_back(e);
        }
    }
    if (remaining < 0) {
        Money spent = budget - out.ticks_to_money(remaining); // for the diagnostic only
        throw Error(ErrorKind::budget_infeasible,
                    "budget infeasible: initial assignment costs about " + spent.str() +
                        " with budget " + budget.str());
    }
    out.initial_remaining_ticks = remaining;
    std::make_heap(heap.begin(), heap.end(), PqWorse{});

    auto snapshot = [&]() {
        std::vector<PqSnapshotEntry> snap;
        snap.reserve(heap.size());
        std::vector<PqEntry> sorted(heap);
        std::sort(sorted.begin(), sorted.end(),
                  [](const PqEntry& a, const PqEntry& b) { return PqWorse{}(b, a); });
        for (const PqEntry& e : sorted)
            snap.push_back(PqSnapshotEntry{frontiers[e.query].query_id,
                                           frontiers[e.query].entries[e.target].state,
                                           delta_slope(frontiers[e.query], e.target)});
        out.pq_snapshots.push_back(std::move(snap));
    };
    if (options.record_pq_snapshots) snapshot();

    int step = 0;
    while (!heap.empty() && remaining > 0) {
        std::pop_heap(heap.begin(), heap.end(), PqWorse{});
        PqEntry top = heap.back();
        heap.pop_back();

        const Frontier& f = frontiers[top.query];
        if (remaining - top.cost_ticks < 0) {
            // Unaffordable: record and drop, mirroring the plain continue.
            out.skipped_upgrades.push_back(SkippedUpgrade{
                f.query_id, f.entries[top.target].state, "insufficient budget"});
            continue;
        }

        remaining -= top.cost_ticks;
        out.chosen[top.query] = top.target;
        out.total_proxy_utility += top.gain;
        ++step;
        out.trace.push_back(TraceRow{step, f.query_id, f.entries[top.target].state,
                                     delta_slope(f, top.target), remaining});

        std::size_t next = top.target + 1;
        if (next < f.entries.size()) {
            PqEntry e;
            e.query = top.query;
            e.target = static_cast<std::uint32_t>(next);
            e.gain = static_cast<std::int32_t>(f.entries[next].utility -
                                               f.entries[next - 1].utility);
            e.cost_ticks = entry_ticks_i64(f.entries[next].cost, scale) -
                           entry_ticks_i64(f.entries[next - 1].cost, scale);
            heap.push_back(e);
            std::push_heap(heap.begin(), heap.end(), PqWorse{});
        }
        if (options.record_pq_snapshots) snapshot();
    }

    out.remaining_ticks = remaining;
    out.states.reserve(frontiers.size());
    for (std::size_t i = 0; i < frontiers.size(); ++i)
        out.states.push_back(frontiers[i].entries[out.chosen[i]].state);
    return out;
}

std::vector<InvocationBatch> pack_batches(const Assignment& assignment) {
    std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < assignment.states.size(); ++i) {
        const State& s = assignment.states[i];
        groups[{s.model_index, s.batch_size}].push_back(i);
    }
    std::vector<InvocationBatch> batches;
    for (const auto& [key, members] : groups) {
        for (std::size_t at = 0; at < members.size();
             at += static_cast<std::size_t>(key.second)) {
            InvocationBatch b;
            b.model_index = key.first;
            b.batch_size = key.second;
            std::size_t end = std::min(members.size(), at + static_cast<std::size_t>(key.second));
            for (std::size_t j = at; j < end; ++j) {
                b.query_indices.push_back(members[j]);
                b.query_ids.push_back(assignment.query_ids[members[j]]);
            }
            batches.push_back(std::move(b));
        }
    }
    return batches;
}

Money exact_spend(std::span<const InvocationBatch> batches, const ModelPool& pool,
                  std::span<const Query> queries) {
    Money total;
    for (const InvocationBatch& b : batches) {
        const ModelSpec& m = pool.model(b.model_index);
        total += system_prompt_cost(m);
        for (std::size_t idx : b.query_indices) {
            if (idx >= queries.size()) throw schema_error("exact_spend: query index out of range");
            total += query_cost(queries[idx], m);
        }
    }
    return total;
}

} // namespace robatch

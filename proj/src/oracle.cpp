#include "robatch/oracle.hpp"

#include <algorithm>
#include <map>

namespace robatch {

namespace {

constexpr std::int64_t kMaxTickScale = std::int64_t{1} << 40;

struct Eq4Group {
    Money sys_cost;          // per invocation
    std::int32_t batch = 1;
    std::int64_t count = 0;  // queries currently assigned
    Money spent;             // invocations * sys + query parts
};

class Enumerator {
  public:
    explicit Enumerator(const ExactInstance& inst) : inst_(inst) {
        std::uint64_t combos = 1;
        for (const auto& q : inst.queries) {
            if (q.options.empty())
                throw schema_error("oracle: query '" + q.id + "' has no states");
            if (combos > inst.enumeration_cap / q.options.size()) {
                throw Error(ErrorKind::oracle_cap,
                            "oracle: assignment space exceeds the enumeration cap of " +
                                std::to_string(inst.enumeration_cap));
            }
            combos *= q.options.size();
        }

        if (inst.mode == CostMode::amortized) {
            scale_ = 1;
            for (const auto& q : inst.queries)
                for (const auto& o : q.options)
                    scale_ = checked_lcm(scale_, o.cost.batch, kMaxTickScale);
            budget_ticks_ = static_cast<int128>(inst.budget.micro()) * scale_;
            // Cheapest remaining completion per suffix, for pruning.
            min_suffix_.assign(inst.queries.size() + 1, 0);
            for (std::size_t i = inst.queries.size(); i-- > 0;) {
                int128 best = inst.queries[i].options[0].cost.ticks(scale_);
                for (const auto& o : inst.queries[i].options)
                    best = std::min(best, o.cost.ticks(scale_));
                min_suffix_[i] = min_suffix_[i + 1] + best;
            }
        } else {
            init_eq4_groups();
        }
        choice_.assign(inst.queries.size(), 0);
    }

    ExactSolution run() {
        descend(0, 0, 0);
        if (!found_) {
            throw Error(ErrorKind::budget_infeasible,
                        "oracle: no assignment fits budget " + inst_.budget.str());
        }
        return ExactSolution{best_utility_, best_choice_};
    }

  private:
    void init_eq4_groups() {
        // Group key (model, batch); sys cost must be consistent per model.
        std::map<std::int32_t, Money> sys_by_model;
        for (const auto& q : inst_.queries) {
            for (const auto& o : q.options) {
                auto [it, inserted] = sys_by_model.emplace(o.state.model_index, o.cost.sys_part);
                if (!inserted && it->second != o.cost.sys_part)
                    throw schema_error("oracle: inconsistent system-prompt cost for model " +
                                       std::to_string(o.state.model_index));
                if (o.state.batch_size != o.cost.batch)
                    throw schema_error("oracle: exact_eq4 mode requires the cost denominator to "
                                       "equal the state batch size");
                auto key = std::make_pair(o.state.model_index, o.state.batch_size);
                if (!group_index_.count(key)) {
                    group_index_[key] = groups_.size();
                    groups_.push_back(Eq4Group{o.cost.sys_part, o.state.batch_size, 0, Money{}});
                }
            }
        }
    }

    // Amortized mode: cost_so_far is in ticks. Eq4 mode: groups_ carry state
    // and cost_so_far is unused (tracked in eq4_spent_).
    void descend(std::size_t qi, int128 cost_so_far, UtilityMicro utility_so_far) {
        if (qi == inst_.queries.size()) {
            if (!found_ || utility_so_far > best_utility_) {
                found_ = true;
                best_utility_ = utility_so_far;
                best_choice_ = choice_;
            }
            return;
        }
        const auto& options = inst_.queries[qi].options;
        for (std::size_t oi = 0; oi < options.size(); ++oi) {
            const auto& opt = options[oi];
            choice_[qi] = oi;
            if (inst_.mode == CostMode::amortized) {
                int128 c = cost_so_far + opt.cost.ticks(scale_);
                if (c + min_suffix_[qi + 1] > budget_ticks_) continue;
                descend(qi + 1, c, utility_so_far + opt.utility);
            } else {
                Eq4Group& g =
                    groups_[group_index_.at({opt.state.model_index, opt.state.batch_size})];
                // A new invocation opens whenever the group count crosses a
                // multiple of the batch size.
                Money delta = opt.cost.query_part;
                if (g.count % g.batch == 0) delta += g.sys_cost;
                if (eq4_spent_ + delta > inst_.budget) continue;
                g.count += 1;
                g.spent += delta;
                eq4_spent_ += delta;
                descend(qi + 1, 0, utility_so_far + opt.utility);
                g.count -= 1;
                g.spent -= delta;
                eq4_spent_ -= delta;
            }
        }
    }

    const ExactInstance& inst_;
    std::int64_t scale_ = 1;
    int128 budget_ticks_ = 0;
    std::vector<int128> min_suffix_;

    std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> group_index_;
    std::vector<Eq4Group> groups_;
    Money eq4_spent_;

    std::vector<std::size_t> choice_;
    bool found_ = false;
    UtilityMicro best_utility_ = 0;
    std::vector<std::size_t> best_choice_;
};

} // namespace

ExactSolution exact_solve(const ExactInstance& instance) {
    if (instance.queries.empty()) return ExactSolution{0, {}};
    return Enumerator(instance).run();
}

void MCInstance::validate() const {
    if (n < 0) throw schema_error("max-coverage: n must be nonnegative");
    if (budget < 0) throw schema_error("max-coverage: budget must be nonnegative");
    if (budget > static_cast<std::int64_t>(sets.size()))
        throw schema_error("max-coverage: budget exceeds the number of sets");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const auto& set : sets) {
        for (std::int64_t e : set) {
            if (e < 1 || e > n)
                throw schema_error("max-coverage: element " + std::to_string(e) +
                                   " out of range [1, " + std::to_string(n) + "]");
            seen[static_cast<std::size_t>(e - 1)] = true;
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw schema_error("max-coverage: element " + std::to_string(i + 1) +
                               " appears in no set");
}

ExactInstance reduce_max_coverage(const MCInstance& mc) {
    mc.validate();
    if (mc.budget < 1)
        throw schema_error("max-coverage reduction requires budget >= 1 "
                           "(the routing side is infeasible at budget 0)");
    std::int32_t n = static_cast<std::int32_t>(mc.n);
    std::int32_t batch = std::max(n, 1);

    std::vector<std::vector<bool>> member(mc.sets.size(),
                                          std::vector<bool>(static_cast<std::size_t>(mc.n), false));
    for (std::size_t k = 0; k < mc.sets.size(); ++k)
        for (std::int64_t e : mc.sets[k]) member[k][static_cast<std::size_t>(e - 1)] = true;

    ExactInstance inst;
    inst.budget = Money::from_units(mc.budget);
    inst.mode = CostMode::exact_eq4;
    for (std::int64_t i = 0; i < mc.n; ++i) {
        ExactInstance::QueryStates q;
        q.id = "e" + std::to_string(i + 1);
        for (std::size_t k = 0; k < mc.sets.size(); ++k) {
            ExactInstance::Option o;
            o.state = State{static_cast<std::int32_t>(k + 1), batch};
            o.cost = StateCost{Money{}, Money::from_units(1), batch};
            o.utility = member[k][static_cast<std::size_t>(i)] ? kUtilityScale : 0;
            q.options.push_back(o);
        }
        inst.queries.push_back(std::move(q));
    }
    return inst;
}

std::int64_t brute_force_max_coverage(const MCInstance& mc) {
    mc.validate();
    std::size_t k = mc.sets.size();
    if (k > 20) throw schema_error("max-coverage brute force supports at most 20 sets");

    std::size_t words = (static_cast<std::size_t>(mc.n) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> masks(k, std::vector<std::uint64_t>(words, 0));
    for (std::size_t s = 0; s < k; ++s)
        for (std::int64_t e : mc.sets[s])
            masks[s][static_cast<std::size_t>(e - 1) / 64] |= std::uint64_t{1} << ((e - 1) % 64);

    std::int64_t best = 0;
    std::vector<std::uint64_t> covered(words);
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << k); ++pick) {
        if (__builtin_popcountll(pick) > mc.budget) continue;
        std::fill(covered.begin(), covered.end(), 0);
        for (std::size_t s = 0; s < k; ++s)
            if (pick & (std::uint64_t{1} << s))
                for (std::size_t w = 0; w < words; ++w) covered[w] |= masks[s][w];
        std::int64_t count = 0;
        for (std::uint64_t w : covered) count += __builtin_popcountll(w);
        best = std::max(best, count);
    }
    return best;
}

ExactInstance instance_from_frontiers(std::span<const Frontier> frontiers, Money budget,
                                      std::uint64_t cap) {
    ExactInstance inst;
    inst.budget = budget;
    inst.mode = CostMode::amortized;
    inst.enumeration_cap = cap;
    for (const Frontier& f : frontiers) {
        ExactInstance::QueryStates q;
        q.id = f.query_id;
        for (const FrontierEntry& e : f.entries)
            q.options.push_back(ExactInstance::Option{e.state, e.cost, e.utility});
        inst.queries.push_back(std::move(q));
    }
    return inst;
}

} // namespace robatch

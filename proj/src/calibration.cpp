#include "robatch/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "robatch/simd/distance.hpp"

namespace robatch {

void CalibrationProfile::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw schema_error("profile epsilon must be in (0,1)");
    for (const auto& m : models) {
        if (m.b_max < 1) throw schema_error("profile '" + m.model_id + "': b_max must be >= 1");
        if (m.effective_batch_size < 1 || m.effective_batch_size > m.b_max)
            throw schema_error("profile '" + m.model_id +
                               "': effective batch size must lie in [1, b_max]");
        for (const auto& s : m.rcu_samples) {
            if (s.batch < 1 || s.batch > m.b_max)
                throw schema_error("profile '" + m.model_id + "': sample batch out of [1, b_max]");
            if (!(s.rcu > 0.0))
                throw schema_error("profile '" + m.model_id + "': retained rcu samples must be positive");
        }
        if (m.scaling.kind == ScalingFn::Kind::piecewise_linear) {
            if (m.scaling.knots.empty() || m.scaling.knots.front() != std::pair<std::int32_t, double>{1, 1.0})
                throw schema_error("profile '" + m.model_id + "': scaling knots must start at (1, 1)");
            for (std::size_t i = 1; i < m.scaling.knots.size(); ++i)
                if (m.scaling.knots[i].first <= m.scaling.knots[i - 1].first)
                    throw schema_error("profile '" + m.model_id +
                                       "': scaling knots must strictly increase in batch size");
        }
    }
}

std::vector<std::size_t> k_center_coreset(std::span<const std::vector<float>> embeddings,
                                          std::size_t m, std::uint64_t seed) {
    (void)seed;
    std::size_t n = embeddings.size();
    if (n == 0) throw schema_error("k-center: empty embedding list");
    if (m < 1 || m > n)
        throw schema_error("k-center: m=" + std::to_string(m) + " out of range [1, " +
                           std::to_string(n) + "]");
    std::size_t dim = embeddings[0].size();
    for (const auto& e : embeddings)
        if (e.size() != dim) throw schema_error("k-center: inconsistent embedding dimensions");

    std::vector<float> centroid(dim, 0.0f);
    {
        std::vector<double> acc(dim, 0.0);
        for (const auto& e : embeddings)
            for (std::size_t j = 0; j < dim; ++j) acc[j] += e[j];
        for (std::size_t j = 0; j < dim; ++j)
            centroid[j] = static_cast<float>(acc[j] / static_cast<double>(n));
    }

    std::vector<std::size_t> centers;
    centers.reserve(m);
    std::vector<float> nearest(n, std::numeric_limits<float>::infinity());
    std::vector<bool> picked(n, false);

    // Seed: the point farthest from the centroid, lowest index on ties.
    std::size_t first = 0;
    float best = -1.0f;
    for (std::size_t i = 0; i < n; ++i) {
        float d = simd::l2sq_f32(embeddings[i].data(), centroid.data(), dim);
        if (d > best) {
            best = d;
            first = i;
        }
    }
    centers.push_back(first);
    picked[first] = true;

    while (centers.size() < m) {
        const auto& c = embeddings[centers.back()];
        // Update nearest-center distances, then take the farthest point not
        // yet picked (lowest index on ties, so duplicates still get covered).
        std::size_t next = n;
        float far = -1.0f;
        for (std::size_t i = 0; i < n; ++i) {
            float d = simd::l2sq_f32(embeddings[i].data(), c.data(), dim);
            if (d < nearest[i]) nearest[i] = d;
            if (!picked[i] && nearest[i] > far) {
                far = nearest[i];
                next = i;
            }
        }
        centers.push_back(next);
        picked[next] = true;
    }
    return centers;
}

namespace {

std::int64_t epsilon_micro(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw schema_error("epsilon must lie in (0,1)");
    std::int64_t e = std::llround(epsilon * 1e6);
    if (e < 1) e = 1;
    if (e > 999'999) e = 999'999;
    return e;
}

} // namespace

std::int32_t max_batch_size_mean(const ModelSpec& model, Money total_query_cost,
                                 std::int64_t count, double epsilon) {
    if (count < 1) throw schema_error("max_batch_size: empty query set");
    if (!(total_query_cost > Money{}))
        throw schema_error("max_batch_size: expected query cost must be positive");
    std::int64_t e = epsilon_micro(epsilon);
    // ceil(C_sys * (1 - eps) * count / (eps * total)) in exact integers.
    int128 num = static_cast<int128>(system_prompt_cost(model).micro()) * (1'000'000 - e) * count;
    int128 den = static_cast<int128>(e) * total_query_cost.micro();
    int128 b = (num + den - 1) / den;
    if (b < 1) b = 1;
    if (b > std::numeric_limits<std::int32_t>::max()) b = std::numeric_limits<std::int32_t>::max();
    return static_cast<std::int32_t>(b);
}

std::int32_t max_batch_size(const ModelSpec& model, Money expected_query_cost, double epsilon) {
    return max_batch_size_mean(model, expected_query_cost, 1, epsilon);
}

double rcu(const ModelSpec& model, std::int32_t b, Money mean_query_cost, double mean_utility) {
    if (b < 1) throw schema_error("rcu: batch size must be >= 1");
    if (!(mean_utility > 0.0))
        throw schema_error("utility collapse at batch size " + std::to_string(b));
    Money batch_cost = system_prompt_cost(model) + mean_query_cost * b;
    return batch_cost.to_double() / mean_utility;
}

int compare_rcu(const RcuKey& a, const RcuKey& b) {
    bool a_inf = a.den == 0;
    bool b_inf = b.den == 0;
    if (a_inf || b_inf) {
        if (a_inf && b_inf) return 0;
        return a_inf ? 1 : -1;
    }
    int128 lhs = a.num * b.den;
    int128 rhs = b.num * a.den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

std::size_t discrete_unimodal_argmin(std::size_t n,
                                     const std::function<RcuKey(std::size_t)>& eval,
                                     bool exhaustive_scan) {
    if (n == 0) throw schema_error("argmin over empty candidate set");
    std::map<std::size_t, RcuKey> memo;
    auto value = [&](std::size_t i) -> const RcuKey& {
        auto it = memo.find(i);
        if (it == memo.end()) it = memo.emplace(i, eval(i)).first;
        return it->second;
    };

    std::size_t lo = 0;
    std::size_t hi = n - 1;
    if (!exhaustive_scan) {
        while (hi - lo + 1 > 4) {
            std::size_t m1 = lo + (hi - lo) / 3;
            std::size_t m2 = hi - (hi - lo) / 3;
            int c = compare_rcu(value(m1), value(m2));
            if (c < 0) {
                hi = m2 - 1;
            } else if (c > 0) {
                lo = m1 + 1;
            } else {
                // Equal probes straddle the minimum of a strictly V-shaped
                // sequence; shrink both sides.
                lo = m1 + 1;
                hi = m2 - 1;
            }
        }
    }
    std::size_t best = lo;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        if (compare_rcu(value(i), value(best)) < 0) best = i;
    }
    return best;
}

EffectiveBatchResult calibrate_effective_batch(const ModelSpec& model, std::int32_t model_index,
                                               std::span<const Query> coreset,
                                               const BatchUtilityProbe& probe, double epsilon,
                                               bool exhaustive_scan) {
    if (coreset.empty()) throw schema_error("calibration requires a nonempty coreset");

    EffectiveBatchResult out;
    std::int64_t n = static_cast<std::int64_t>(coreset.size());
    Money total_cost;
    for (const Query& q : coreset) total_cost += query_cost(q, model);
    out.b_max = max_batch_size_mean(model, total_cost, n, epsilon);

    for (std::int32_t b : model.batch_grid)
        if (b <= out.b_max) out.grid.push_back(b);
    if (out.grid.empty() || out.grid.front() != 1)
        throw schema_error("model '" + model.id + "': candidate grid must contain batch size 1");

    struct Eval {
        RcuKey key;
        double mean_utility;
        double rcu_value;
    };
    std::map<std::size_t, Eval> evals;
    Money sys = system_prompt_cost(model);
    auto evaluate = [&](std::size_t idx) -> RcuKey {
        auto it = evals.find(idx);
        if (it == evals.end()) {
            std::int32_t b = out.grid[idx];
            ProbeResult pr = probe.run(model_index, b, coreset);
            if (pr.utilities.size() != coreset.size())
                throw schema_error("probe returned " + std::to_string(pr.utilities.size()) +
                                   " utilities for a coreset of " + std::to_string(coreset.size()));
            out.probe_spend += pr.cost;
            std::int64_t util_sum = 0;
            for (double u : pr.utilities) util_sum += utility_from_double(u);
            double mean_u = static_cast<double>(util_sum) / (static_cast<double>(n) * kUtilityScale);
            Eval e;
            e.mean_utility = mean_u;
            // Minimized criterion: amortized per-query cost over per-query
            // utility, compared exactly. num/den ~ (n*C_sys + b*sum_cost) / (b*sum_util).
            e.key.num = static_cast<int128>(sys.micro()) * n +
                        static_cast<int128>(total_cost.micro()) * b;
            e.key.den = util_sum == 0 ? 0 : static_cast<int128>(util_sum) * b;
            double mean_cost = total_cost.to_double() / static_cast<double>(n);
            e.rcu_value = util_sum == 0
                              ? std::numeric_limits<double>::infinity()
                              : (sys.to_double() + static_cast<double>(b) * mean_cost) / mean_u;
            it = evals.emplace(idx, std::move(e)).first;
        }
        return it->second.key;
    };

    evaluate(0); // b=1 is always sampled: the scaling fit anchors there
    std::size_t best = discrete_unimodal_argmin(out.grid.size(), evaluate, exhaustive_scan);
    // The search result is the window minimum; since b=1 (and possibly other
    // ternary probes) were evaluated anyway, take the argmin over everything
    // seen. Identical to the search result on unimodal input.
    for (const auto& [idx, e] : evals) {
        int c = compare_rcu(e.key, evals.at(best).key);
        if (c < 0 || (c == 0 && idx < best)) best = idx; // ties toward the smaller batch
    }
    if (evals.at(best).key.den == 0)
        throw schema_error("model '" + model.id +
                           "': utility collapse at every evaluated batch size");
    out.b_effect = out.grid[best];

    for (const auto& [idx, e] : evals) { // std::map iterates ascending -> ascending in b
        std::int32_t b = out.grid[idx];
        out.utility_samples.push_back(UtilitySample{b, e.mean_utility});
        if (e.key.den != 0) out.samples.push_back(RcuSample{b, e.mean_utility, e.rcu_value});
    }
    return out;
}

CalibrationProfile calibrate_pool(const ModelPool& pool, std::span<const Query> training,
                                  const BatchUtilityProbe& probe,
                                  const CalibrationOptions& options) {
    pool.validate();
    if (training.empty()) throw schema_error("calibration requires a nonempty training set");

    std::vector<std::vector<float>> embeddings;
    embeddings.reserve(training.size());
    for (const Query& q : training) embeddings.push_back(q.embedding);
    std::size_t m = std::min(options.coreset_size, training.size());
    std::vector<std::size_t> chosen = k_center_coreset(embeddings, m, 0);

    std::vector<Query> coreset;
    coreset.reserve(chosen.size());
    for (std::size_t idx : chosen) coreset.push_back(training[idx]);

    CalibrationProfile profile;
    profile.epsilon = options.epsilon;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const ModelSpec& model = pool.models[k];
        EffectiveBatchResult r =
            calibrate_effective_batch(model, static_cast<std::int32_t>(k + 1), coreset, probe,
                                      options.epsilon, options.exhaustive_scan);
        ModelCalibration mc;
        mc.model_id = model.id;
        mc.b_max = r.b_max;
        mc.batch_grid = r.grid;
        mc.effective_batch_size = r.b_effect;
        mc.rcu_samples = r.samples;
        mc.probe_spend = r.probe_spend;
        mc.scaling = options.power_law_scaling && r.utility_samples.size() >= 3
                         ? fit_scaling_power_law(r.utility_samples)
                         : fit_scaling_piecewise(r.utility_samples);
        profile.models.push_back(std::move(mc));
    }
    return profile;
}

ModelPool apply_profile(const ModelPool& pool, const CalibrationProfile& profile) {
    if (profile.models.size() != pool.size())
        throw schema_error("profile covers " + std::to_string(profile.models.size()) +
                           " models but the pool has " + std::to_string(pool.size()));
    ModelPool out = pool;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const ModelCalibration& mc = profile.models[k];
        if (mc.model_id != out.models[k].id)
            throw schema_error("profile model '" + mc.model_id + "' does not match pool model '" +
                               out.models[k].id + "'");
        out.models[k].batch_grid = mc.batch_grid;
        out.models[k].effective_batch_size = mc.effective_batch_size;
        out.models[k].scaling = mc.scaling;
    }
    out.validate();
    return out;
}

} // namespace robatch

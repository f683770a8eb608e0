#include "robatch/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "robatch/frontier.hpp"
#include "robatch/prng.hpp"

namespace robatch {

namespace {

double survival_probability(const SyntheticModelSpec& m, std::int32_t b) {
    if (b <= 1) return 1.0;
    return 1.0 - m.alpha * std::pow(static_cast<double>(b - 1), m.beta);
}

std::vector<std::int32_t> default_grid(std::int32_t max_batch) {
    std::vector<std::int32_t> grid{1};
    for (std::int32_t b = 4; b <= max_batch; b += 4) grid.push_back(b);
    return grid;
}

} // namespace

void SyntheticModelSpec::validate(std::int32_t max_batch) const {
    if (id.empty()) throw schema_error("synthetic model id must not be empty");
    if (competence < 0.0 || competence > 1.0)
        throw schema_error("model '" + id + "': competence must lie in [0,1]");
    if (alpha < 0.0) throw schema_error("model '" + id + "': alpha must be nonnegative");
    if (beta <= 0.0) throw schema_error("model '" + id + "': beta must be positive");
    double tail = survival_probability(*this, max_batch);
    if (tail < 0.0 || tail > 1.0)
        throw schema_error("model '" + id + "': decay curve leaves [0,1] on the grid (value " +
                           std::to_string(tail) + " at batch " + std::to_string(max_batch) + ")");
}

void SyntheticPoolSpec::validate() const {
    if (models.empty()) throw schema_error("synthetic pool has no models");
    if (n_train < 1 || n_test < 1) throw schema_error("workload sizes must be >= 1");
    if (dim < 1) throw schema_error("embedding dimension must be >= 1");
    if (clusters < 1) throw schema_error("cluster count must be >= 1");
    if (difficulty_gradient < 0.0 || difficulty_gradient > 1.0)
        throw schema_error("difficulty gradient must lie in [0,1]");
    if (max_batch < 1) throw schema_error("max_batch must be >= 1");
    if (input_tokens_min < 1 || input_tokens_max < input_tokens_min)
        throw schema_error("invalid input token range");
    if (output_tokens_min < 1 || output_tokens_max < output_tokens_min)
        throw schema_error("invalid output token range");
    for (const auto& m : models) m.validate(max_batch);
}

std::size_t TruthTensor::grid_index(std::int32_t batch) const {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] == batch) return i;
    throw schema_error("truth tensor: batch size " + std::to_string(batch) +
                       " is not materialized");
}

std::uint8_t TruthTensor::at(std::size_t query, std::size_t model, std::int32_t batch) const {
    std::size_t b = grid_index(batch);
    return bits[(query * num_models + model) * grid.size() + b];
}

std::size_t World::truth_row(const std::string& query_id) const {
    auto it = row_index_.find(query_id);
    if (it == row_index_.end()) throw schema_error("unknown query id '" + query_id + "'");
    return it->second;
}

void World::rebuild_row_index() {
    row_index_.clear();
    row_index_.reserve(train.size() + test.size());
    for (std::size_t i = 0; i < train.size(); ++i) row_index_[train[i].id] = i;
    for (std::size_t i = 0; i < test.size(); ++i) row_index_[test[i].id] = train.size() + i;
    if (row_index_.size() != train.size() + test.size())
        throw schema_error("duplicate query ids in the workload");
}

World gen_workload(const SyntheticPoolSpec& spec) {
    spec.validate();
    World world;
    world.spec = spec;

    std::vector<std::int32_t> grid = default_grid(spec.max_batch);
    for (const auto& sm : spec.models) {
        ModelSpec m;
        m.id = sm.id;
        m.input_price = sm.input_price;
        m.output_price = sm.output_price;
        m.system_prompt_tokens = sm.system_prompt_tokens;
        m.batch_grid = grid;
        m.effective_batch_size = 1; // calibration decides
        world.pool.models.push_back(std::move(m));
    }
    world.pool.validate();

    Prng rng(spec.seed);
    std::size_t dim = static_cast<std::size_t>(spec.dim);

    std::vector<std::vector<float>> centers(static_cast<std::size_t>(spec.clusters));
    for (auto& c : centers) {
        c.resize(dim);
        for (auto& v : c) v = static_cast<float>(4.0 * rng.normal());
    }

    auto make_query = [&](const std::string& id, std::int32_t cluster) {
        Query q;
        q.id = id;
        q.embedding.resize(dim);
        for (std::size_t j = 0; j < dim; ++j)
            q.embedding[j] =
                centers[static_cast<std::size_t>(cluster)][j] + static_cast<float>(0.3 * rng.normal());
        q.input_tokens = rng.uniform_int(spec.input_tokens_min, spec.input_tokens_max);
        q.expected_output_tokens = rng.uniform_int(spec.output_tokens_min, spec.output_tokens_max);
        return q;
    };

    std::int64_t total = spec.n_train + spec.n_test;
    std::vector<std::int32_t> cluster_of(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i) {
        std::int32_t cluster = static_cast<std::int32_t>(rng.uniform_int(0, spec.clusters - 1));
        cluster_of[static_cast<std::size_t>(i)] = cluster;
        std::string id = (i < spec.n_train ? "train" : "test") +
                         std::to_string(i < spec.n_train ? i + 1 : i - spec.n_train + 1);
        Query q = make_query(id, cluster);
        if (i < spec.n_train)
            world.train.push_back(std::move(q));
        else
            world.test.push_back(std::move(q));
    }

    // Difficulty ramps over clusters; tying it to the embedding geometry is
    // what gives the router signal to learn.
    auto difficulty = [&](std::int32_t cluster) {
        if (spec.clusters == 1) return 0.0;
        return spec.difficulty_gradient * static_cast<double>(cluster) /
               static_cast<double>(spec.clusters - 1);
    };

    TruthTensor& t = world.truth;
    t.grid = grid;
    t.num_queries = static_cast<std::size_t>(total);
    t.num_models = spec.models.size();
    t.bits.assign(t.num_queries * t.num_models * grid.size(), 0);
    for (std::int64_t i = 0; i < total; ++i) {
        double easy = 1.0 - difficulty(cluster_of[static_cast<std::size_t>(i)]);
        for (std::size_t k = 0; k < spec.models.size(); ++k) {
            const SyntheticModelSpec& sm = spec.models[k];
            bool base = rng.bernoulli(sm.competence * easy);
            for (std::size_t g = 0; g < grid.size(); ++g) {
                bool survives = grid[g] == 1 || rng.bernoulli(survival_probability(sm, grid[g]));
                t.bits[(static_cast<std::size_t>(i) * t.num_models + k) * grid.size() + g] =
                    base && survives ? 1 : 0;
            }
        }
    }

    for (std::size_t i = 0; i < world.train.size(); ++i) {
        std::vector<std::uint8_t> labels(t.num_models);
        for (std::size_t k = 0; k < t.num_models; ++k) labels[k] = t.at(i, k, 1);
        world.train[i].truth_utilities = std::move(labels);
    }
    world.rebuild_row_index();
    return world;
}

ProbeResult SimulatorProbe::run(std::int32_t model_index, std::int32_t batch,
                                std::span<const Query> coreset) const {
    const World& w = *world_;
    if (model_index < 1 || static_cast<std::size_t>(model_index) > w.pool.size())
        throw schema_error("probe: unknown model index " + std::to_string(model_index));
    const ModelSpec& model = w.pool.model(model_index);

    ProbeResult out;
    out.utilities.reserve(coreset.size());
    for (const Query& q : coreset) {
        std::size_t row = w.truth_row(q.id);
        out.utilities.push_back(
            static_cast<double>(w.truth.at(row, static_cast<std::size_t>(model_index - 1), batch)));
    }
    out.cost = batch_group_cost(model, batch, coreset);
    return out;
}

EvalPoint replay(const World& world, std::span<const Query> queries, const Assignment& assignment,
                 std::span<const InvocationBatch> batches) {
    if (assignment.states.size() != queries.size())
        throw schema_error("replay: assignment does not cover the workload");
    for (const InvocationBatch& b : batches) {
        if (b.query_indices.size() > static_cast<std::size_t>(b.batch_size))
            throw schema_error("replay: invocation holds more queries than its batch size");
        for (std::size_t idx : b.query_indices)
            if (!(assignment.states[idx] == State{b.model_index, b.batch_size}))
                throw schema_error("replay: batches are inconsistent with the assignment");
    }

    EvalPoint p;
    p.proxy_utility = utility_to_double(assignment.total_proxy_utility);
    double realized = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const State& s = assignment.states[i];
        std::size_t row = world.truth_row(queries[i].id);
        realized += world.truth.at(row, static_cast<std::size_t>(s.model_index - 1), s.batch_size);
    }
    p.realized_utility = realized;
    p.realized_cost = exact_spend(batches, world.pool, queries);
    return p;
}

Strategy Strategy::parse(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::int32_t param = 0;
    if (colon != std::string::npos) {
        try {
            param = std::stoi(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw schema_error("strategy '" + text + "' has a malformed parameter");
        }
    }
    if (head == "robatch") return Strategy{Kind::robatch, 0};
    if (head == "router_only") return Strategy{Kind::router_only, 0};
    if (head == "batch_only") {
        if (param < 1) throw schema_error("batch_only strategy needs a model index, e.g. batch_only:1");
        return Strategy{Kind::batch_only, param};
    }
    if (head == "fixed_batch") {
        if (param < 1) throw schema_error("fixed_batch strategy needs a batch size, e.g. fixed_batch:4");
        return Strategy{Kind::fixed_batch, param};
    }
    throw schema_error("unknown strategy '" + text + "'");
}

std::string Strategy::name() const {
    switch (kind) {
    case Kind::robatch: return "robatch";
    case Kind::router_only: return "router_only";
    case Kind::batch_only: return "batch_only:" + std::to_string(param);
    case Kind::fixed_batch: return "fixed_batch:" + std::to_string(param);
    }
    return "?";
}

PreparedWorld prepare_world(const World& world, const StrategyOptions& options) {
    SimulatorProbe probe(world);
    CalibrationProfile profile = calibrate_pool(world.pool, world.train, probe, options.calibration);
    ModelPool calibrated = apply_profile(world.pool, profile);
    Router router = Router::train(world.train, options.k_neighbors, options.metric);
    std::vector<std::vector<double>> estimates;
    estimates.reserve(world.test.size());
    for (const Query& q : world.test)
        estimates.push_back(router.estimate_unbatched_utility(q.embedding));
    return PreparedWorld{std::move(calibrated), std::move(profile), std::move(router),
                         std::move(estimates)};
}

EvalPoint run_strategy(const Strategy& strategy, const World& world, const PreparedWorld& prep,
                       Money budget) {
    const ModelPool& pool = prep.calibrated_pool;

    Assignment assignment;
    std::vector<InvocationBatch> batches;

    if (strategy.kind == Strategy::Kind::fixed_batch) {
        // Route each query to its best-estimate model, then group that
        // model's queries at the fixed batch size (largest grid value not
        // above the requested one). No budget-driven upgrades.
        assignment.tick_scale = 1;
        for (std::size_t i = 0; i < world.test.size(); ++i) {
            const auto& est = prep.test_estimates[i];
            std::size_t best = 0;
            for (std::size_t k = 1; k < est.size(); ++k)
                if (est[k] > est[best]) best = k;
            const ModelSpec& m = pool.models[best];
            std::int32_t b = 1;
            for (std::int32_t g : m.batch_grid)
                if (g <= strategy.param) b = g;
            assignment.query_ids.push_back(world.test[i].id);
            assignment.chosen.push_back(0);
            assignment.states.push_back(State{static_cast<std::int32_t>(best + 1), b});
            assignment.total_proxy_utility +=
                utility_from_double(proxy_utility(est[best], m.scaling, b));
        }
        batches = pack_batches(assignment);
        EvalPoint p = replay(world, world.test, assignment, batches);
        p.strategy = strategy.name();
        p.budget = budget;
        return p;
    }

    std::vector<State> states;
    switch (strategy.kind) {
    case Strategy::Kind::robatch:
        states = candidate_states(pool);
        break;
    case Strategy::Kind::router_only:
        for (std::size_t k = 0; k < pool.size(); ++k)
            states.push_back(State{static_cast<std::int32_t>(k + 1), 1});
        break;
    case Strategy::Kind::batch_only: {
        if (strategy.param < 1 || static_cast<std::size_t>(strategy.param) > pool.size())
            throw schema_error("batch_only: model index out of range");
        const ModelSpec& m = pool.model(strategy.param);
        for (std::int32_t b : m.batch_grid) {
            if (b > m.effective_batch_size) break;
            states.push_back(State{strategy.param, b});
        }
        break;
    }
    default: break;
    }

    std::vector<Frontier> frontiers;
    frontiers.reserve(world.test.size());
    for (std::size_t i = 0; i < world.test.size(); ++i)
        frontiers.push_back(build_frontier(world.test[i], states, prep.test_estimates[i], pool));

    assignment = greedy_schedule(frontiers, budget);
    batches = pack_batches(assignment);
    EvalPoint p = replay(world, world.test, assignment, batches);
    p.strategy = strategy.name();
    p.budget = budget;
    return p;
}

} // namespace robatch

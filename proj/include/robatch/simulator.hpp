#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "robatch/calibration.hpp"
#include "robatch/money.hpp"
#include "robatch/router.hpp"
#include "robatch/scheduler.hpp"
#include "robatch/types.hpp"

namespace robatch {

/// Desk-scale stand-in for an LLM pool: every model's pricing plus a planted
/// competence and utility-decay curve 1 - alpha*(b-1)^beta.
struct SyntheticModelSpec {
    std::string id;
    Money input_price;
    Money output_price;
    std::int64_t system_prompt_tokens = 0;
    double competence = 0.5; // P(correct at b=1) before difficulty scaling
    double alpha = 0.0;      // decay curve parameters
    double beta = 1.0;

    void validate(std::int32_t max_batch) const;
};

struct SyntheticPoolSpec {
    std::vector<SyntheticModelSpec> models;
    std::int64_t n_train = 128;
    std::int64_t n_test = 128;
    std::int32_t dim = 8;
    std::int32_t clusters = 4;
    double difficulty_gradient = 0.5; // difficulty ramps linearly over clusters
    std::int32_t max_batch = 16;      // grid = {1, 4, 8, ...} up to this value
    std::int64_t input_tokens_min = 32, input_tokens_max = 128;
    std::int64_t output_tokens_min = 8, output_tokens_max = 32;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Planted per-(query, model, batch) 0/1 utilities, materialized up front so
/// calibration, scheduling and replay all see one consistent world.
struct TruthTensor {
    std::vector<std::int32_t> grid; // batch sizes materialized (same for all models)
    std::size_t num_queries = 0;
    std::size_t num_models = 0;
    std::vector<std::uint8_t> bits; // [query][model][grid index]

    std::uint8_t at(std::size_t query, std::size_t model, std::int32_t batch) const;
    std::size_t grid_index(std::int32_t batch) const;
};

struct World {
    SyntheticPoolSpec spec;
    ModelPool pool;
    std::vector<Query> train; // carry truth_utilities (the b=1 slice)
    std::vector<Query> test;
    TruthTensor truth; // rows: train queries first, then test queries

    std::size_t truth_row(const std::string& query_id) const;
    void rebuild_row_index();

  private:
    std::unordered_map<std::string, std::size_t> row_index_;
};

/// Deterministic per seed.
World gen_workload(const SyntheticPoolSpec& spec);

/// BatchUtilityProbe over the planted tensor: utilities are the planted
/// values restricted to the coreset; cost is the realized cost of the
/// ceil(n/b) probe invocations.
class SimulatorProbe : public BatchUtilityProbe {
  public:
    explicit SimulatorProbe(const World& world) : world_(&world) {}
    ProbeResult run(std::int32_t model_index, std::int32_t batch,
                    std::span<const Query> coreset) const override;

  private:
    const World* world_;
};

/// One evaluated (strategy, budget) point.
struct EvalPoint {
    std::string strategy;
    Money budget;
    Money realized_cost;    // grouped cost with ceiling slack
    double realized_utility = 0.0; // number of correctly served queries
    double proxy_utility = 0.0;    // the scheduler's own objective value
};

/// Replays an assignment against the planted truth: realized utility is the
/// sum of planted utilities at each query's final state, realized cost the
/// exact grouped spend.
EvalPoint replay(const World& world, std::span<const Query> queries,
                 const Assignment& assignment, std::span<const InvocationBatch> batches);

struct Strategy {
    enum class Kind { robatch, router_only, batch_only, fixed_batch };
    Kind kind = Kind::robatch;
    std::int32_t param = 0; // model index for batch_only, batch size for fixed_batch

    static Strategy parse(const std::string& text);
    std::string name() const;
};

struct StrategyOptions {
    CalibrationOptions calibration;
    std::size_t k_neighbors = 5;
    RouterMetric metric = RouterMetric::cosine;
};

/// Shared per-world preparation (calibration + router), so budget sweeps do
/// not repeat the modeling stage.
struct PreparedWorld {
    ModelPool calibrated_pool;
    CalibrationProfile profile;
    Router router;
    std::vector<std::vector<double>> test_estimates; // per test query, per model
};

PreparedWorld prepare_world(const World& world, const StrategyOptions& options);

/// Runs one strategy at one budget over the test slice and replays it against
/// the planted truth.
EvalPoint run_strategy(const Strategy& strategy, const World& world, const PreparedWorld& prep,
                       Money budget);

} // namespace robatch

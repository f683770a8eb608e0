#pragma once

#include <string>
#include <vector>

#include "robatch/calibration.hpp"
#include "robatch/frontier.hpp"
#include "robatch/oracle.hpp"
#include "robatch/router.hpp"
#include "robatch/scheduler.hpp"
#include "robatch/simulator.hpp"
#include "robatch/types.hpp"

namespace robatch::io {

/// Workload file: {"dim": d, "queries": [{id, embedding, input_tokens,
/// expected_output_tokens, truth_utilities?}]}.
struct Workload {
    std::size_t dim = 0;
    std::vector<Query> queries;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

ModelPool load_pool(const std::string& path);
std::string pool_to_json(const ModelPool& pool);

Workload load_workload(const std::string& path, std::size_t num_models);
std::string workload_to_json(const Workload& workload);

CalibrationProfile load_profile(const std::string& path);
std::string profile_to_json(const CalibrationProfile& profile);

Router load_router(const std::string& path);
std::string router_to_json(const Router& router);

/// Raw frontier file: per query a list of (model, batch, cost, utility)
/// entries; used when per-state costs are externally given rather than
/// derived from a pool. Entries are pruned/sorted on load.
struct RawFrontiers {
    std::vector<Frontier> frontiers;
};

RawFrontiers load_frontiers(const std::string& path);

MCInstance load_mc_instance(const std::string& path);
std::string exact_instance_to_json(const ExactInstance& instance);

SyntheticPoolSpec load_sim_spec(const std::string& path);

TruthTensor load_truth(const std::string& path);
std::string truth_to_json(const TruthTensor& truth);

std::string assignment_to_json(const Assignment& assignment, Money budget);
std::string batches_to_json(const std::vector<InvocationBatch>& batches);

/// Trace CSV: step,query,model,batch,delta,budget_after. Step 0 is the
/// initialization row (query "init").
std::string trace_to_csv(const Assignment& assignment);

/// Recorded priority-queue snapshots, one row per queued upgrade:
/// step,rank,query,model,batch,delta (rank 0 is the queue head).
std::string pq_snapshots_to_csv(const Assignment& assignment);

/// Frontier CSV: query,model,batch,cost,utility.
std::string frontiers_to_csv(std::span<const Frontier> frontiers);

/// Eval CSV: strategy,budget,cost,utility.
std::string eval_points_to_csv(std::span<const EvalPoint> points);

} // namespace robatch::io

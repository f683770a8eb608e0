#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robatch/io.hpp"
#include "robatch/oracle.hpp"
#include "robatch/simulator.hpp"

namespace fs = std::filesystem;
using namespace robatch;

namespace {

int log_level() {
    const char* env = std::getenv("ROBATCH_LOG");
    return env ? std::atoi(env) : 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[robatch] " << msg << "\n";
}

struct RouteInputs {
    std::vector<Frontier> frontiers;
    // Present only in pipeline mode; raw-frontier mode has no cost components.
    std::optional<ModelPool> pool;
    std::vector<Query> queries;
};

RouteInputs load_route_inputs(const std::string& frontiers_path, const std::string& pool_path,
                              const std::string& profile_path, const std::string& workload_path,
                              const std::string& train_path, const std::string& router_path,
                              std::size_t k_neighbors, const std::string& metric_name,
                              const std::string& save_router_path = "") {
    RouteInputs in;
    if (!frontiers_path.empty()) {
        in.frontiers = io::load_frontiers(frontiers_path).frontiers;
        return in;
    }
    if (pool_path.empty() || profile_path.empty() || workload_path.empty())
        throw schema_error("route needs either --frontiers or --pool + --profile + --workload");

    ModelPool pool = io::load_pool(pool_path);
    CalibrationProfile profile = io::load_profile(profile_path);
    ModelPool calibrated = apply_profile(pool, profile);
    io::Workload workload = io::load_workload(workload_path, calibrated.size());

    Router router = [&] {
        if (!router_path.empty()) return io::load_router(router_path);
        if (train_path.empty())
            throw schema_error("route needs --router or --train to estimate utilities");
        io::Workload train = io::load_workload(train_path, calibrated.size());
        for (const Query& q : train.queries)
            if (!q.truth_utilities)
                throw schema_error("training labels required: query '" + q.id +
                                   "' has no truth_utilities");
        RouterMetric metric =
            metric_name == "euclidean" ? RouterMetric::euclidean : RouterMetric::cosine;
        return Router::train(train.queries, k_neighbors, metric);
    }();
    if (!save_router_path.empty()) io::write_file(save_router_path, io::router_to_json(router));

    std::vector<State> states = candidate_states(calibrated);
    log_info("candidate states: " + std::to_string(states.size()));
    for (const Query& q : workload.queries) {
        std::vector<double> est = router.estimate_unbatched_utility(q.embedding);
        in.frontiers.push_back(build_frontier(q, states, est, calibrated));
    }
    in.pool = std::move(calibrated);
    in.queries = std::move(workload.queries);
    return in;
}

int cmd_calibrate(const std::string& pool_path, const std::string& train_path,
                  const std::string& truth_path, const std::string& out_path, double epsilon,
                  std::size_t coreset_size, bool exhaustive, bool power_law) {
    ModelPool pool = io::load_pool(pool_path);
    io::Workload train = io::load_workload(train_path, pool.size());
    for (const Query& q : train.queries)
        if (!q.truth_utilities)
            throw schema_error("training labels required: query '" + q.id +
                               "' has no truth_utilities");

    // The probe replays planted batched utilities from the truth tensor file.
    World world;
    world.pool = pool;
    world.train = train.queries;
    world.truth = io::load_truth(truth_path);
    if (world.truth.num_models != pool.size())
        throw schema_error("truth tensor covers " + std::to_string(world.truth.num_models) +
                           " models, pool has " + std::to_string(pool.size()));
    world.rebuild_row_index();
    SimulatorProbe probe(world);

    CalibrationOptions options;
    options.epsilon = epsilon;
    options.coreset_size = coreset_size;
    options.exhaustive_scan = exhaustive;
    options.power_law_scaling = power_law;
    CalibrationProfile profile = calibrate_pool(pool, train.queries, probe, options);
    io::write_file(out_path, io::profile_to_json(profile));

    std::cout << "model b_max b_effect\n";
    for (const ModelCalibration& mc : profile.models)
        std::cout << mc.model_id << " " << mc.b_max << " " << mc.effective_batch_size << "\n";
    return 0;
}

int cmd_route(const RouteInputs& in, Money budget, const std::string& out_dir,
              bool record_snapshots) {
    fs::create_directories(out_dir);
    ScheduleOptions options;
    options.record_pq_snapshots = record_snapshots;
    Assignment assignment = greedy_schedule(in.frontiers, budget, options);
    std::vector<InvocationBatch> batches = pack_batches(assignment);

    io::write_file(out_dir + "/assignment.json", io::assignment_to_json(assignment, budget));
    io::write_file(out_dir + "/trace.csv", io::trace_to_csv(assignment));
    io::write_file(out_dir + "/batches.json", io::batches_to_json(batches));
    if (options.record_pq_snapshots)
        io::write_file(out_dir + "/pq_snapshots.csv", io::pq_snapshots_to_csv(assignment));

    Money amortized = budget - assignment.remaining_budget();
    std::cout << "amortized_spend=" << amortized.str();
    if (in.pool) {
        Money realized = exact_spend(batches, *in.pool, in.queries);
        std::cout << " exact_spend=" << realized.str();
    } else {
        std::cout << " exact_spend=n/a"; // raw frontiers carry no cost split
    }
    std::cout << " total_proxy_utility="
              << utility_to_double(assignment.total_proxy_utility) << "\n";
    return 0;
}

int cmd_frontier(const RouteInputs& in, const std::string& out_path) {
    io::write_file(out_path, io::frontiers_to_csv(in.frontiers));
    std::cout << "wrote " << in.frontiers.size() << " frontiers to " << out_path << "\n";
    return 0;
}

int cmd_simulate(const std::string& spec_path, const std::string& budgets_arg,
                 const std::string& strategies_arg, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override, const std::string& dump_dir,
                 bool exhaustive) {
    SyntheticPoolSpec spec = io::load_sim_spec(spec_path);
    if (seed_override) spec.seed = *seed_override;
    World world = gen_workload(spec);

    if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        io::write_file(dump_dir + "/pool.json", io::pool_to_json(world.pool));
        io::Workload train{static_cast<std::size_t>(spec.dim), world.train};
        io::Workload test{static_cast<std::size_t>(spec.dim), world.test};
        io::write_file(dump_dir + "/train.json", io::workload_to_json(train));
        io::write_file(dump_dir + "/test.json", io::workload_to_json(test));
        io::write_file(dump_dir + "/truth.json", io::truth_to_json(world.truth));
        log_info("dumped world files to " + dump_dir);
    }

    std::vector<Money> budgets;
    {
        std::stringstream ss(budgets_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) budgets.push_back(Money::parse(tok));
    }
    if (budgets.empty()) throw schema_error("simulate: --budgets must list at least one budget");
    std::vector<Strategy> strategies;
    {
        std::stringstream ss(strategies_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) strategies.push_back(Strategy::parse(tok));
    }
    if (strategies.empty()) throw schema_error("simulate: --strategies must list at least one");

    StrategyOptions options;
    options.calibration.exhaustive_scan = exhaustive;
    PreparedWorld prep = prepare_world(world, options);
    std::vector<EvalPoint> points;
    for (const Strategy& s : strategies)
        for (Money b : budgets) points.push_back(run_strategy(s, world, prep, b));

    std::string csv = io::eval_points_to_csv(points);
    if (out_path.empty() || out_path == "-")
        std::cout << csv;
    else
        io::write_file(out_path, csv);
    return 0;
}

int cmd_reduce(const std::string& mc_path, const std::string& out_path,
               std::uint64_t oracle_cap) {
    MCInstance mc = io::load_mc_instance(mc_path);
    std::int64_t covered = brute_force_max_coverage(mc);
    std::cout << "max_coverage=" << covered << "\n";

    if (mc.budget < 1) {
        std::cout << "routing instance infeasible at budget 0; utilities equal: no\n";
        return 0;
    }
    ExactInstance inst = reduce_max_coverage(mc);
    inst.enumeration_cap = oracle_cap;
    if (!out_path.empty()) io::write_file(out_path, io::exact_instance_to_json(inst));
    ExactSolution sol = exact_solve(inst);
    std::int64_t routing = sol.utility / kUtilityScale;
    std::cout << "routing_optimum=" << routing << "\n";
    std::cout << routing << " == " << covered << ": " << (routing == covered ? "yes" : "no")
              << "\n";
    std::cout << "utilities equal: " << (routing == covered ? "yes" : "no") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"budget-constrained LLM routing with batch amortization"};
    app.require_subcommand(1);

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "fit per-model batching profiles");
    std::string pool_path, train_path, truth_path, profile_out = "profile.json";
    double epsilon = 0.01;
    std::size_t coreset_size = 256;
    bool exhaustive = false, power_law = false;
    calibrate->add_option("--pool", pool_path)->required();
    calibrate->add_option("--train", train_path)->required();
    calibrate->add_option("--truth", truth_path, "planted batched-utility tensor (probe source)")
        ->required();
    calibrate->add_option("--out", profile_out);
    calibrate->add_option("--epsilon", epsilon);
    calibrate->add_option("--coreset-size", coreset_size);
    calibrate->add_flag("--exhaustive-scan", exhaustive);
    calibrate->add_flag("--power-law", power_law);

    // route
    auto* route = app.add_subcommand("route", "assign every query a (model, batch) state");
    std::string frontiers_path, profile_path, workload_path, router_path, out_dir = "out";
    std::string budget_arg, metric_name = "cosine";
    std::string route_pool_path, route_train_path;
    std::size_t k_neighbors = 5;
    bool snapshots = false;
    route->add_option("--frontiers", frontiers_path, "raw per-query frontier JSON");
    route->add_option("--pool", route_pool_path);
    route->add_option("--profile", profile_path);
    route->add_option("--workload", workload_path);
    route->add_option("--train", route_train_path, "labeled workload to fit the router");
    route->add_option("--router", router_path, "router sidecar JSON");
    std::string save_router_path;
    route->add_option("--save-router", save_router_path, "write the fitted router sidecar here");
    route->add_option("--budget", budget_arg)->required();
    route->add_option("--out", out_dir);
    route->add_option("--k-neighbors", k_neighbors);
    route->add_option("--metric", metric_name)->check(CLI::IsMember({"cosine", "euclidean"}));
    route->add_flag("--pq-snapshots", snapshots);

    // frontier
    auto* frontier = app.add_subcommand("frontier", "export per-query Pareto frontiers as CSV");
    std::string f_frontiers, f_pool, f_profile, f_workload, f_train, f_router;
    std::string f_out = "frontiers.csv";
    frontier->add_option("--frontiers", f_frontiers);
    frontier->add_option("--pool", f_pool);
    frontier->add_option("--profile", f_profile);
    frontier->add_option("--workload", f_workload);
    frontier->add_option("--train", f_train);
    frontier->add_option("--router", f_router);
    frontier->add_option("--out", f_out);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "strategy x budget sweep on a synthetic pool");
    std::string spec_path, budgets_arg, strategies_arg = "robatch,router_only";
    std::string sim_out, dump_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
    simulate->add_option("--spec", spec_path)->required();
    simulate->add_option("--budgets,--budget", budgets_arg, "comma-separated sweep")->required();
    simulate->add_option("--strategies,--strategy", strategies_arg, "comma-separated list");
    simulate->add_option("--out", sim_out);
    simulate->add_option("--seed", seed)->each([&](const std::string&) { have_seed = true; });
    simulate->add_option("--dump-world", dump_dir, "write pool/train/test/truth JSON files");
    simulate->add_flag("--exhaustive-scan", exhaustive);

    // reduce
    auto* reduce = app.add_subcommand("reduce", "max-coverage to routing reduction + both optima");
    std::string mc_path, reduce_out;
    std::uint64_t oracle_cap = 5'000'000;
    reduce->add_option("--mc", mc_path)->required();
    reduce->add_option("--out", reduce_out);
    reduce->add_option("--oracle-cap", oracle_cap);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*calibrate)
            return cmd_calibrate(pool_path, train_path, truth_path, profile_out, epsilon,
                                 coreset_size, exhaustive, power_law);
        if (*route) {
            RouteInputs in = load_route_inputs(frontiers_path, route_pool_path, profile_path,
                                               workload_path, route_train_path, router_path,
                                               k_neighbors, metric_name, save_router_path);
            return cmd_route(in, Money::parse(budget_arg), out_dir, snapshots);
        }
        if (*frontier) {
            RouteInputs in = load_route_inputs(f_frontiers, f_pool, f_profile, f_workload,
                                               f_train, f_router, k_neighbors, metric_name);
            return cmd_frontier(in, f_out);
        }
        if (*simulate)
            return cmd_simulate(spec_path, budgets_arg, strategies_arg, sim_out,
                                have_seed ? std::optional<std::uint64_t>(seed) : std::nullopt,
                                dump_dir, exhaustive);
        if (*reduce) return cmd_reduce(mc_path, reduce_out, oracle_cap);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

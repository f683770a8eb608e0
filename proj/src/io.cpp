#include "robatch/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace robatch::io {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw schema_error(what + ": invalid JSON");
    return j;
}

json load_json(const std::string& path) { return parse_json(read_file(path), path); }

// Type mismatches inside nlohmann getters surface as schema errors, not
// generic failures.
template <typename Fn>
auto with_schema_errors(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw schema_error(path + ": " + e.what());
    }
}

Money money_field(const json& j, const char* key) {
    if (!j.contains(key)) throw schema_error(std::string("missing money field '") + key + "'");
    const json& v = j.at(key);
    if (v.is_string()) return Money::parse(v.get<std::string>());
    if (v.is_number_integer()) return Money::from_units(v.get<std::int64_t>());
    throw schema_error(std::string("money field '") + key +
                       "' must be a decimal string (or integer)");
}

std::string format_delta(double delta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", delta);
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw schema_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw schema_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw schema_error("write to '" + path + "' failed");
}

ModelPool load_pool(const std::string& path) {
    return with_schema_errors(path, [&]() -> ModelPool {
        json j = load_json(path);
        if (!j.contains("models") || !j["models"].is_array())
            throw schema_error(path + ": expected {\"models\": [...]}");
        ModelPool pool;
        for (const json& jm : j["models"]) {
            ModelSpec m;
            m.id = jm.value("id", "");
            m.input_price = money_field(jm, "input_price");
            m.output_price = money_field(jm, "output_price");
            m.system_prompt_tokens = jm.value("system_prompt_tokens", std::int64_t{0});
            if (jm.contains("batch_grid")) m.batch_grid = jm["batch_grid"].get<std::vector<std::int32_t>>();
            if (jm.contains("effective_batch_size"))
                m.effective_batch_size = jm["effective_batch_size"].get<std::int32_t>();
            pool.models.push_back(std::move(m));
        }
        pool.validate();
        return pool;
    });
}

std::string pool_to_json(const ModelPool& pool) {
    json j;
    j["models"] = json::array();
    for (const ModelSpec& m : pool.models) {
        json jm;
        jm["id"] = m.id;
        jm["input_price"] = m.input_price.str();
        jm["output_price"] = m.output_price.str();
        jm["system_prompt_tokens"] = m.system_prompt_tokens;
        jm["batch_grid"] = m.batch_grid;
        jm["effective_batch_size"] = m.effective_batch_size;
        j["models"].push_back(std::move(jm));
    }
    return j.dump(2) + "\n";
}

Workload load_workload(const std::string& path, std::size_t num_models) {
    return with_schema_errors(path, [&]() -> Workload {
        json j = load_json(path);
        if (!j.contains("dim") || !j.contains("queries"))
            throw schema_error(path + ": expected {\"dim\": d, \"queries\": [...]}");
        Workload w;
        w.dim = j["dim"].get<std::size_t>();
        for (const json& jq : j["queries"]) {
            Query q;
            q.id = jq.value("id", "");
            q.embedding = jq.value("embedding", std::vector<float>{});
            q.input_tokens = jq.value("input_tokens", std::int64_t{0});
            q.expected_output_tokens = jq.value("expected_output_tokens", std::int64_t{0});
            if (jq.contains("truth_utilities"))
                q.truth_utilities = jq["truth_utilities"].get<std::vector<std::uint8_t>>();
            // num_models == 0 means the pool size is unknown here; label lengths
            // are then only checked for internal consistency.
            std::size_t expect_k =
                num_models != 0 ? num_models : (q.truth_utilities ? q.truth_utilities->size() : 0);
            q.validate(w.dim, expect_k);
            w.queries.push_back(std::move(q));
        }
        if (w.queries.empty()) throw schema_error(path + ": workload has no queries");
        {
            std::unordered_set<std::string> ids;
            for (const Query& q : w.queries)
                if (!ids.insert(q.id).second)
                    throw schema_error(path + ": duplicate query id '" + q.id + "'");
        }
        return w;
    });
}

std::string workload_to_json(const Workload& workload) {
    json j;
    j["dim"] = workload.dim;
    j["queries"] = json::array();
    for (const Query& q : workload.queries) {
        json jq;
        jq["id"] = q.id;
        jq["embedding"] = q.embedding;
        jq["input_tokens"] = q.input_tokens;
        jq["expected_output_tokens"] = q.expected_output_tokens;
        if (q.truth_utilities) jq["truth_utilities"] = *q.truth_utilities;
        j["queries"].push_back(std::move(jq));
    }
    return j.dump() + "\n";
}

CalibrationProfile load_profile(const std::string& path) {
    return with_schema_errors(path, [&]() -> CalibrationProfile {
        json j = load_json(path);
        CalibrationProfile p;
        p.epsilon = j.value("epsilon", 0.01);
        for (const json& jm : j.value("models", json::array())) {
            ModelCalibration mc;
            mc.model_id = jm.value("id", "");
            mc.b_max = jm.value("b_max", 1);
            mc.batch_grid = jm.value("batch_grid", std::vector<std::int32_t>{1});
            mc.effective_batch_size = jm.value("b_effect", 1);
            mc.probe_spend = jm.contains("probe_spend") ? money_field(jm, "probe_spend") : Money{};
            const json& js = jm.at("scaling");
            std::string kind = js.value("kind", "constant");
            if (kind == "constant") {
                mc.scaling = ScalingFn::constant();
            } else if (kind == "piecewise_linear") {
                mc.scaling.kind = ScalingFn::Kind::piecewise_linear;
                for (const json& knot : js.at("knots"))
                    mc.scaling.knots.emplace_back(knot.at(0).get<std::int32_t>(),
                                                  knot.at(1).get<double>());
            } else if (kind == "power_law") {
                mc.scaling.kind = ScalingFn::Kind::power_law;
                mc.scaling.alpha = js.at("alpha").get<double>();
                mc.scaling.beta = js.at("beta").get<double>();
            } else {
                throw schema_error(path + ": unknown scaling kind '" + kind + "'");
            }
            for (const json& s : jm.value("rcu_samples", json::array()))
                mc.rcu_samples.push_back(RcuSample{s.at(0).get<std::int32_t>(),
                                                   s.at(1).get<double>(), s.at(2).get<double>()});
            p.models.push_back(std::move(mc));
        }
        p.validate();
        return p;
    });
}

std::string profile_to_json(const CalibrationProfile& profile) {
    json j;
    j["epsilon"] = profile.epsilon;
    j["models"] = json::array();
    for (const ModelCalibration& mc : profile.models) {
        json jm;
        jm["id"] = mc.model_id;
        jm["b_max"] = mc.b_max;
        jm["batch_grid"] = mc.batch_grid;
        jm["b_effect"] = mc.effective_batch_size;
        jm["probe_spend"] = mc.probe_spend.str();
        json js;
        switch (mc.scaling.kind) {
        case ScalingFn::Kind::constant: js["kind"] = "constant"; break;
        case ScalingFn::Kind::piecewise_linear: {
            js["kind"] = "piecewise_linear";
            js["knots"] = json::array();
            for (const auto& [b, r] : mc.scaling.knots) js["knots"].push_back(json::array({b, r}));
            break;
        }
        case ScalingFn::Kind::power_law:
            js["kind"] = "power_law";
            js["alpha"] = mc.scaling.alpha;
            js["beta"] = mc.scaling.beta;
            break;
        }
        jm["scaling"] = std::move(js);
        jm["rcu_samples"] = json::array();
        for (const RcuSample& s : mc.rcu_samples)
            jm["rcu_samples"].push_back(json::array({s.batch, s.mean_utility, s.rcu}));
        j["models"].push_back(std::move(jm));
    }
    return j.dump(2) + "\n";
}

Router load_router(const std::string& path) {
    return with_schema_errors(path, [&]() -> Router {
        json j = load_json(path);
        std::size_t dim = j.at("dim").get<std::size_t>();
        std::size_t num_models = j.at("num_models").get<std::size_t>();
        std::size_t k = j.at("k_neighbors").get<std::size_t>();
        std::string metric = j.value("metric", "cosine");
        std::vector<float> embeddings;
        for (const json& row : j.at("embeddings"))
            for (const json& v : row) embeddings.push_back(v.get<float>());
        std::vector<std::uint8_t> labels;
        for (const json& row : j.at("labels"))
            for (const json& v : row) labels.push_back(v.get<std::uint8_t>());
        return Router::from_parts(std::move(embeddings), dim, std::move(labels), num_models, k,
                                  metric == "euclidean" ? RouterMetric::euclidean
                                                        : RouterMetric::cosine);
    });
}

std::string router_to_json(const Router& router) {
    json j;
    j["dim"] = router.dim();
    j["num_models"] = router.num_models();
    j["k_neighbors"] = router.k_neighbors();
    j["metric"] = router.metric() == RouterMetric::euclidean ? "euclidean" : "cosine";
    j["embeddings"] = json::array();
    j["labels"] = json::array();
    auto emb = router.embeddings();
    auto lab = router.labels();
    for (std::size_t i = 0; i < router.training_size(); ++i) {
        json row = json::array();
        for (std::size_t d = 0; d < router.dim(); ++d) row.push_back(emb[i * router.dim() + d]);
        j["embeddings"].push_back(std::move(row));
        json lrow = json::array();
        for (std::size_t k = 0; k < router.num_models(); ++k)
            lrow.push_back(lab[i * router.num_models() + k]);
        j["labels"].push_back(std::move(lrow));
    }
    return j.dump() + "\n";
}

RawFrontiers load_frontiers(const std::string& path) {
    return with_schema_errors(path, [&]() -> RawFrontiers {
        json j = load_json(path);
        RawFrontiers out;
        for (const json& jq : j.at("queries")) {
            std::vector<FrontierEntry> entries;
            for (const json& je : jq.at("entries")) {
                FrontierEntry e;
                e.state.model_index = je.at("model").get<std::int32_t>();
                e.state.batch_size = je.at("batch").get<std::int32_t>();
                if (e.state.model_index < 1 || e.state.batch_size < 1)
                    throw schema_error(path + ": states must have model >= 1 and batch >= 1");
                e.cost = StateCost::raw(money_field(je, "cost"));
                e.utility = utility_from_double(je.at("utility").get<double>());
                entries.push_back(e);
            }
            out.frontiers.push_back(build_frontier(jq.at("id").get<std::string>(), std::move(entries)));
        }
        if (out.frontiers.empty()) throw schema_error(path + ": no queries");
        return out;
    });
}

MCInstance load_mc_instance(const std::string& path) {
    return with_schema_errors(path, [&]() -> MCInstance {
        json j = load_json(path);
        MCInstance mc;
        mc.n = j.at("n").get<std::int64_t>();
        mc.budget = j.at("budget").get<std::int64_t>();
        for (const json& set : j.at("sets")) mc.sets.push_back(set.get<std::vector<std::int64_t>>());
        mc.validate();
        return mc;
    });
}

std::string exact_instance_to_json(const ExactInstance& instance) {
    json j;
    j["budget"] = instance.budget.str();
    j["cost_mode"] = instance.mode == CostMode::amortized ? "amortized" : "exact_eq4";
    j["queries"] = json::array();
    for (const auto& q : instance.queries) {
        json jq;
        jq["id"] = q.id;
        jq["options"] = json::array();
        for (const auto& o : q.options) {
            json jo;
            jo["model"] = o.state.model_index;
            jo["batch"] = o.state.batch_size;
            jo["query_cost"] = o.cost.query_part.str();
            jo["sys_cost"] = o.cost.sys_part.str();
            jo["cost_batch"] = o.cost.batch;
            jo["utility"] = utility_to_double(o.utility);
            jq["options"].push_back(std::move(jo));
        }
        j["queries"].push_back(std::move(jq));
    }
    return j.dump(2) + "\n";
}

SyntheticPoolSpec load_sim_spec(const std::string& path) {
    return with_schema_errors(path, [&]() -> SyntheticPoolSpec {
        json j = load_json(path);
        SyntheticPoolSpec spec;
        for (const json& jm : j.at("models")) {
            SyntheticModelSpec m;
            m.id = jm.value("id", "");
            m.input_price = money_field(jm, "input_price");
            m.output_price = money_field(jm, "output_price");
            m.system_prompt_tokens = jm.value("system_prompt_tokens", std::int64_t{0});
            m.competence = jm.value("competence", 0.5);
            m.alpha = jm.value("alpha", 0.0);
            m.beta = jm.value("beta", 1.0);
            spec.models.push_back(std::move(m));
        }
        spec.n_train = j.value("n_train", std::int64_t{128});
        spec.n_test = j.value("n_test", std::int64_t{128});
        spec.dim = j.value("dim", 8);
        spec.clusters = j.value("clusters", 4);
        spec.difficulty_gradient = j.value("difficulty_gradient", 0.5);
        spec.max_batch = j.value("max_batch", 16);
        spec.input_tokens_min = j.value("input_tokens_min", std::int64_t{32});
        spec.input_tokens_max = j.value("input_tokens_max", std::int64_t{128});
        spec.output_tokens_min = j.value("output_tokens_min", std::int64_t{8});
        spec.output_tokens_max = j.value("output_tokens_max", std::int64_t{32});
        spec.seed = j.value("seed", std::uint64_t{1});
        spec.validate();
        return spec;
    });
}

TruthTensor load_truth(const std::string& path) {
    return with_schema_errors(path, [&]() -> TruthTensor {
        json j = load_json(path);
        TruthTensor t;
        t.grid = j.at("grid").get<std::vector<std::int32_t>>();
        t.num_queries = j.at("num_queries").get<std::size_t>();
        t.num_models = j.at("num_models").get<std::size_t>();
        t.bits = j.at("bits").get<std::vector<std::uint8_t>>();
        if (t.bits.size() != t.num_queries * t.num_models * t.grid.size())
            throw schema_error(path + ": truth tensor size mismatch");
        return t;
    });
}

std::string truth_to_json(const TruthTensor& truth) {
    json j;
    j["grid"] = truth.grid;
    j["num_queries"] = truth.num_queries;
    j["num_models"] = truth.num_models;
    j["bits"] = truth.bits;
    return j.dump() + "\n";
}

std::string assignment_to_json(const Assignment& assignment, Money budget) {
    json j;
    j["budget"] = budget.str();
    j["initial_remaining_budget"] = assignment.initial_remaining_budget().str();
    j["remaining_budget"] = assignment.remaining_budget().str();
    j["total_proxy_utility"] = utility_to_double(assignment.total_proxy_utility);
    j["assignments"] = json::array();
    for (std::size_t i = 0; i < assignment.states.size(); ++i) {
        json ja;
        ja["query"] = assignment.query_ids[i];
        ja["model"] = assignment.states[i].model_index;
        ja["batch"] = assignment.states[i].batch_size;
        j["assignments"].push_back(std::move(ja));
    }
    j["skipped_upgrades"] = json::array();
    for (const SkippedUpgrade& s : assignment.skipped_upgrades) {
        json js;
        js["query"] = s.query_id;
        js["model"] = s.state.model_index;
        js["batch"] = s.state.batch_size;
        js["reason"] = s.reason;
        j["skipped_upgrades"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

std::string batches_to_json(const std::vector<InvocationBatch>& batches) {
    json j;
    j["batches"] = json::array();
    for (const InvocationBatch& b : batches) {
        json jb;
        jb["model"] = b.model_index;
        jb["batch_size"] = b.batch_size;
        jb["queries"] = b.query_ids;
        j["batches"].push_back(std::move(jb));
    }
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const Assignment& assignment) {
    std::ostringstream out;
    out << "step,query,model,batch,delta,budget_after\n";
    out << "0,init,,,," << assignment.initial_remaining_budget().str() << "\n";
    for (const TraceRow& row : assignment.trace) {
        out << row.step << ',' << row.query_id << ',' << row.state.model_index << ','
            << row.state.batch_size << ',' << format_delta(row.delta) << ','
            << assignment.ticks_to_money(row.budget_after_ticks).str() << "\n";
    }
    return out.str();
}

std::string pq_snapshots_to_csv(const Assignment& assignment) {
    std::ostringstream out;
    out << "step,rank,query,model,batch,delta\n";
    for (std::size_t step = 0; step < assignment.pq_snapshots.size(); ++step) {
        const auto& snap = assignment.pq_snapshots[step];
        for (std::size_t rank = 0; rank < snap.size(); ++rank) {
            out << step << ',' << rank << ',' << snap[rank].query_id << ','
                << snap[rank].state.model_index << ',' << snap[rank].state.batch_size << ','
                << format_delta(snap[rank].delta) << "\n";
        }
    }
    return out.str();
}

std::string frontiers_to_csv(std::span<const Frontier> frontiers) {
    std::ostringstream out;
    out << "query,model,batch,cost,utility\n";
    for (const Frontier& f : frontiers) {
        for (const FrontierEntry& e : f.entries) {
            out << f.query_id << ',' << e.state.model_index << ',' << e.state.batch_size << ','
                << format_double(e.cost.to_double()) << ',' << format_double(utility_to_double(e.utility))
                << "\n";
        }
    }
    return out.str();
}

std::string eval_points_to_csv(std::span<const EvalPoint> points) {
    std::ostringstream out;
    out << "strategy,budget,cost,utility\n";
    for (const EvalPoint& p : points) {
        out << p.strategy << ',' << p.budget.str() << ',' << p.realized_cost.str() << ','
            << format_double(p.realized_utility) << "\n";
    }
    return out.str();
}

} // namespace robatch::io

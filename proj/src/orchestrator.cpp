// SPDX-License-Identifier: Apache-2.0
#include "lgt/orchestrator.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "lgt/model.hpp"
#include "lgt/prompts.hpp"
#include "lgt/trainer.hpp"

namespace lgt {

using nlohmann::json;

// ---------------------------------------------------------------------------
// serialization

PromptSnapshot PromptSnapshot::of(const PromptState& p) {
    return {hash_hex(fnv1a(p.base_text)), p.guidance_notes};
}

json PromptSnapshot::to_json() const { return json{{"base_hash", base_hash}, {"notes", notes}}; }

PromptSnapshot PromptSnapshot::from_json(const json& j) {
    PromptSnapshot s;
    s.base_hash = j.at("base_hash").get<std::string>();
    s.notes = j.at("notes").get<std::vector<std::string>>();
    return s;
}

json HistoryEntry::to_json() const {
    return json{{"epoch", epoch},
                {"config", config.to_json()},
                {"delta", delta_applied.to_json()},
                {"apply_report", apply_report.to_json()},
                {"metrics", metrics.to_json()},
                {"success", success_bit},
                {"prompt", advisor_prompt_snapshot.to_json()},
                {"rationales",
                 {{"advisor", advisor_rationale},
                  {"evaluator", evaluator_rationale},
                  {"optimizer", optimizer_rationale}}}};
}

static ConfigDelta delta_from_json(const json& j) {
    ConfigDelta d;
    for (const json& entry : j.at("changes")) {
        ConfigChange ch;
        if (entry.contains("set_numeric")) {
            ch.kind = ConfigChange::Kind::set_numeric;
            ch.field = entry.at("set_numeric").at("field").get<std::string>();
            ch.value = entry.at("set_numeric").at("value").get<double>();
        } else if (entry.contains("scale_numeric")) {
            ch.kind = ConfigChange::Kind::scale_numeric;
            ch.field = entry.at("scale_numeric").at("field").get<std::string>();
            ch.value = entry.at("scale_numeric").at("factor").get<double>();
        } else if (entry.contains("set_categorical")) {
            ch.kind = ConfigChange::Kind::set_categorical;
            ch.field = entry.at("set_categorical").at("field").get<std::string>();
            ch.str_value = entry.at("set_categorical").at("value").get<std::string>();
        } else if (entry.contains("add_method")) {
            ch.kind = ConfigChange::Kind::add_method;
            ch.str_value = entry.at("add_method").get<std::string>();
        } else if (entry.contains("remove_method")) {
            ch.kind = ConfigChange::Kind::remove_method;
            ch.str_value = entry.at("remove_method").get<std::string>();
        } else {
            ch.kind = ConfigChange::Kind::no_change;
        }
        d.changes.push_back(std::move(ch));
    }
    return d;
}

static ApplyReport report_from_json(const json& j) {
    ApplyReport r;
    for (const json& e : j) {
        ApplyEvent ev;
        ev.field = e.at("field").get<std::string>();
        ev.action = e.at("action").get<std::string>();
        ev.old_value = e.at("old_value").get<double>();
        ev.requested_value = e.at("requested_value").get<double>();
        ev.capped_value = e.at("capped_value").get<double>();
        ev.applied_value = e.at("applied_value").get<double>();
        ev.trust_region_capped = e.at("trust_region_capped").get<bool>();
        ev.clamped = e.at("clamped").get<bool>();
        ev.dropped = e.at("dropped").get<bool>();
        ev.detail = e.at("detail").get<std::string>();
        r.events.push_back(std::move(ev));
    }
    return r;
}

HistoryEntry HistoryEntry::from_json(const json& j) {
    HistoryEntry e;
    e.epoch = j.at("epoch").get<int>();
    e.config = Configuration::from_json(j.at("config"));
    e.delta_applied = delta_from_json(j.at("delta"));
    e.apply_report = report_from_json(j.at("apply_report"));
    e.metrics = EpochMetrics::from_json(j.at("metrics"));
    e.success_bit = j.at("success").get<bool>();
    e.advisor_prompt_snapshot = PromptSnapshot::from_json(j.at("prompt"));
    e.advisor_rationale = j.at("rationales").at("advisor").get<std::string>();
    e.evaluator_rationale = j.at("rationales").at("evaluator").get<std::string>();
    e.optimizer_rationale = j.at("rationales").at("optimizer").get<std::string>();
    return e;
}

History append_history(History history, HistoryEntry entry) {
    if (entry.epoch != static_cast<int>(history.size()) + 1)
        throw std::invalid_argument("append_history: epoch " + std::to_string(entry.epoch) +
                                    " is not contiguous with history of length " +
                                    std::to_string(history.size()));
    history.push_back(std::move(entry));
    return history;
}

json Budget::to_json() const {
    return json{{"max_configurations", max_configurations},
                {"epochs_per_evaluation", epochs_per_evaluation},
                {"iterations", iterations}};
}

Budget Budget::from_json(const json& j) {
    Budget b;
    b.max_configurations = j.value("max_configurations", 50);
    b.epochs_per_evaluation = j.value("epochs_per_evaluation", 10);
    b.iterations = j.value("iterations", 3);
    return b;
}

json RunRecord::to_json() const {
    json hist = json::array();
    for (const auto& e : history) hist.push_back(e.to_json());
    return json{{"schema_version", schema_version},
                {"method", method},
                {"seed", seed},
                {"iteration_index", iteration_index},
                {"dataset", {{"name", dataset_name}, {"hash", dataset_hash}, {"task", lgt::to_string(task)}}},
                {"budget", budget.to_json()},
                {"configs_trained", configs_trained},
                {"status", status},
                {"error", error},
                {"history", hist},
                {"epoch_test_loss", epoch_test_loss},
                {"final_test_metrics", final_test_metrics.to_json()},
                {"final_test_loss", final_test_loss},
                {"transcript_path", transcript_path}};
}

RunRecord RunRecord::from_json(const json& j) {
    RunRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.iteration_index = j.at("iteration_index").get<int>();
    r.dataset_name = j.at("dataset").at("name").get<std::string>();
    r.dataset_hash = j.at("dataset").at("hash").get<std::string>();
    r.task = task_from_string(j.at("dataset").at("task").get<std::string>());
    r.budget = Budget::from_json(j.at("budget"));
    r.configs_trained = j.at("configs_trained").get<int>();
    r.status = j.at("status").get<std::string>();
    r.error = j.value("error", std::string());
    for (const json& e : j.at("history")) r.history.push_back(HistoryEntry::from_json(e));
    r.epoch_test_loss = j.at("epoch_test_loss").get<std::vector<double>>();
    r.final_test_metrics = MetricSet::from_json(j.at("final_test_metrics"));
    r.final_test_loss = j.at("final_test_loss").get<double>();
    r.transcript_path = j.at("transcript_path").get<std::string>();
    return r;
}

// ---------------------------------------------------------------------------
// helpers

static std::string summarize_delta(const ConfigDelta& d) {
    if (d.is_no_change()) return "no_change";
    std::string s;
    for (const auto& ch : d.changes) {
        if (!s.empty()) s += "; ";
        switch (ch.kind) {
            case ConfigChange::Kind::set_numeric:
                s += "set " + ch.field + "=" + std::to_string(ch.value);
                break;
            case ConfigChange::Kind::scale_numeric:
                s += "scale " + ch.field + " x" + std::to_string(ch.value);
                break;
            case ConfigChange::Kind::set_categorical:
                s += "set " + ch.field + "=" + ch.str_value;
                break;
            case ConfigChange::Kind::add_method:
                s += "add " + ch.str_value;
                break;
            case ConfigChange::Kind::remove_method:
                s += "remove " + ch.str_value;
                break;
            case ConfigChange::Kind::no_change:
                s += "no_change";
                break;
        }
    }
    return s;
}

static RunRecord make_record_shell(const RunContext& ctx, int iteration_index) {
    RunRecord r;
    r.method = ctx.method;
    r.seed = ctx.seed;
    r.iteration_index = iteration_index;
    r.dataset_name = ctx.manifest.name;
    // Hash over all three splits: methods sharing a seed must see identical data.
    const std::uint64_t h = mix_seed(dataset_hash(ctx.fit), mix_seed(dataset_hash(ctx.val), dataset_hash(ctx.test)));
    r.dataset_hash = hash_hex(h);
    r.task = ctx.fit.task;
    r.budget = ctx.budget;
    // Record the stable file name only: absolute paths would break the
    // byte-identical-across-reruns contract for records written elsewhere.
    r.transcript_path = std::filesystem::path(ctx.transcript_path).filename().string();
    return r;
}

static GenerationRequest make_request(const RenderedPrompt& parts) {
    GenerationRequest req;
    req.system_text = parts.system_text;
    req.user_text = parts.user_text;
    req.temperature = 0.2;
    req.max_tokens = 1024;
    return req;
}

static json request_to_json(const GenerationRequest& req) {
    return json{{"system_text", req.system_text},
                {"user_text", req.user_text},
                {"temperature", req.temperature},
                {"max_tokens", req.max_tokens},
                {"model_name", req.model_name}};
}

// ---------------------------------------------------------------------------
// LGT iteration (Algorithm-1 epoch loop)

RunRecord run_lgt_iteration(const RunContext& ctx, const ArchSpec& arch,
                            PromptState& advisor_prompt, Backend& backend, BudgetLedger& ledger,
                            TranscriptWriter& transcript, int iteration_index) {
    RunRecord record = make_record_shell(ctx, iteration_index);
    if (!ledger.can_train()) {
        record.status = "failed";
        record.error = "configuration budget exhausted";
        record.configs_trained = 0;
        return record;
    }
    ledger.consume();
    record.configs_trained = 1;

    const int total_epochs = ctx.budget.epochs_per_evaluation;
    const TaskType task = ctx.fit.task;
    const int output_dim = task == TaskType::classification ? ctx.fit.n_classes : 1;

    Configuration config = default_config(ctx.space, task);
    config.arch = arch;

    SeededRng init_rng(mix_seed(ctx.seed, 1000 + static_cast<std::uint64_t>(iteration_index)));
    SeededRng train_rng(mix_seed(ctx.seed, 2000 + static_cast<std::uint64_t>(iteration_index)));

    MlpModel model = build_model(arch, ctx.fit.n_features(), output_dim, init_rng);
    OptimizerState opt_state;

    std::vector<EpochMetrics> metric_history;
    EpochMetrics baseline_metrics;
    Configuration baseline_config;

    try {
        for (int t = 1; t <= total_epochs; ++t) {
            // 1. train
            EpochMetrics metrics =
                train_epoch(model, ctx.fit, ctx.val, config, t - 1, total_epochs, opt_state, train_rng);
            metric_history.push_back(metrics);
            record.epoch_test_loss.push_back(evaluate_model(model, ctx.test).loss);
            transcript.step(iteration_index, t, "train",
                            json{{"metrics", metrics.to_json()}, {"wall_time_ms", metrics.wall_time_ms}});

            if (t == 1) {
                baseline_metrics = metrics;
                baseline_config = config;
            }

            // 2. advise
            AdvisorState advisor_state = build_advisor_state(metric_history, config, ctx.space);
            RenderedPrompt adv_parts = render_prompt_parts(advisor_prompt, advisor_state.to_json());
            AgentCall adv_call;
            adv_call.kind = AgentKind::advisor;
            adv_call.request = make_request(adv_parts);
            adv_call.advisor = &advisor_state;
            const std::string adv_text = backend.generate(adv_call);
            ConfigDeltaResponse delta_resp = parse_advisor_response(adv_text, ctx.space);
            transcript.step(iteration_index, t, "advise",
                            json{{"request", request_to_json(adv_call.request)},
                                 {"response", adv_text},
                                 {"parse_failed", delta_resp.parse_failed},
                                 {"warnings", delta_resp.warnings},
                                 {"delta", delta_resp.delta.to_json()}});

            // 3. apply (architecture fields stay fixed within the iteration)
            ApplyReport report;
            ConfigDelta epoch_delta = strip_arch_changes(delta_resp.delta, ctx.space, report);
            auto [next_config, apply_report] = apply_delta(config, epoch_delta, ctx.space);
            report.events.insert(report.events.end(), apply_report.events.begin(),
                                 apply_report.events.end());
            transcript.step(iteration_index, t, "apply",
                            json{{"delta", delta_resp.delta.to_json()},
                                 {"report", report.to_json()},
                                 {"staged_config", next_config.to_json()}});

            // 4. evaluate (judges M_t under c_t against the epoch-1 baseline)
            EvaluatorState eval_state{metrics, config, baseline_metrics, baseline_config};
            PromptState eval_prompt{prompts::kEvaluatorBase, {}};
            RenderedPrompt eval_parts = render_prompt_parts(eval_prompt, eval_state.to_json());
            AgentCall eval_call;
            eval_call.kind = AgentKind::evaluator;
            eval_call.request = make_request(eval_parts);
            eval_call.evaluator = &eval_state;
            const std::string eval_text = backend.generate(eval_call);
            EvalResponse eval_resp = parse_evaluator_response(eval_text);
            transcript.step(iteration_index, t, "evaluate",
                            json{{"request", request_to_json(eval_call.request)},
                                 {"response", eval_text},
                                 {"parse_failed", eval_resp.parse_failed},
                                 {"success", eval_resp.success}});

            // 5. prompt update (digest covers epochs 1..t exactly once)
            OptimizerAgentState opt_agent_state;
            for (const auto& h : record.history)
                opt_agent_state.digest.push_back({h.metrics.epoch, h.metrics.val_loss,
                                                  h.metrics.metric_set.primary(), h.success_bit,
                                                  summarize_delta(h.delta_applied)});
            opt_agent_state.digest.push_back({t, metrics.val_loss, metrics.metric_set.primary(),
                                              eval_resp.success, summarize_delta(delta_resp.delta)});
            opt_agent_state.current_metrics = metrics;
            PromptState opt_prompt{prompts::kOptimizerBase, {}};
            RenderedPrompt opt_parts = render_prompt_parts(opt_prompt, opt_agent_state.to_json());
            AgentCall opt_call;
            opt_call.kind = AgentKind::optimizer;
            opt_call.request = make_request(opt_parts);
            opt_call.optimizer = &opt_agent_state;
            const std::string opt_text = backend.generate(opt_call);
            PromptDeltaResponse prompt_delta = parse_optimizer_response(opt_text);
            PromptState next_prompt = apply_prompt_delta(advisor_prompt, prompt_delta);
            transcript.step(iteration_index, t, "prompt_update",
                            json{{"request", request_to_json(opt_call.request)},
                                 {"response", opt_text},
                                 {"parse_failed", prompt_delta.parse_failed},
                                 {"note_ops", prompt_delta.to_json()},
                                 {"notes_after", next_prompt.guidance_notes}});

            // 6. history append
            HistoryEntry entry;
            entry.epoch = t;
            entry.config = config;
            entry.delta_applied = delta_resp.delta;
            entry.apply_report = report;
            entry.metrics = metrics;
            entry.success_bit = eval_resp.success;
            entry.advisor_prompt_snapshot = PromptSnapshot::of(advisor_prompt);
            entry.advisor_rationale = delta_resp.rationale;
            entry.evaluator_rationale = eval_resp.rationale;
            entry.optimizer_rationale = prompt_delta.rationale;
            record.history = append_history(std::move(record.history), std::move(entry));
            transcript.step(iteration_index, t, "history_append",
                            json{{"history_size", static_cast<int>(record.history.size())}});

            config = std::move(next_config);
            advisor_prompt = std::move(next_prompt);
        }

        const EvalOutcome final_eval = evaluate_model(model, ctx.test);
        record.final_test_metrics = final_eval.metrics;
        record.final_test_loss = final_eval.loss;
    } catch (const std::exception& e) {
        record.status = "failed";
        record.error = e.what();
        transcript.step(iteration_index, static_cast<int>(record.history.size()) + 1, "run_failed",
                        json{{"error", record.error}});
    }
    return record;
}

// ---------------------------------------------------------------------------
// architecture optimization between iterations

static ArchitectState build_architect_state(const std::vector<RunRecord>& iteration_history,
                                            const TaskType task) {
    ArchitectState s;
    s.task = task;
    for (const auto& rec : iteration_history) {
        if (rec.history.empty()) continue;
        IterationSummary sum;
        sum.index = rec.iteration_index;
        sum.arch = rec.history.front().config.arch;
        sum.first_train_loss = rec.history.front().metrics.train_loss;
        sum.final_train_loss = rec.history.back().metrics.train_loss;
        sum.final_val_loss = rec.history.back().metrics.val_loss;
        double gap = 0.0;
        for (const auto& h : rec.history) {
            if (task == TaskType::classification)
                gap += h.metrics.train_metric_set.accuracy - h.metrics.metric_set.accuracy;
            else if (h.metrics.train_metric_set.mse > 1e-12)
                gap += h.metrics.metric_set.mse / h.metrics.train_metric_set.mse - 1.0;
        }
        sum.mean_overfit_gap = gap / static_cast<double>(rec.history.size());
        sum.final_primary = rec.history.back().metrics.metric_set.primary();
        s.iterations.push_back(std::move(sum));
    }
    if (!s.iterations.empty()) s.current_arch = s.iterations.back().arch;
    return s;
}

ArchSpec optimize_architecture(const std::vector<RunRecord>& iteration_history,
                               const ConfigurationSpace& space, Backend& backend,
                               TranscriptWriter* transcript) {
    if (iteration_history.empty())
        throw std::invalid_argument("optimize_architecture: needs at least one completed iteration");

    ArchitectState state = build_architect_state(iteration_history, iteration_history.back().task);
    PromptState arch_prompt{prompts::kArchitectBase, {}};
    RenderedPrompt parts = render_prompt_parts(arch_prompt, state.to_json());
    AgentCall call;
    call.kind = AgentKind::architect;
    call.request = make_request(parts);
    call.architect = &state;
    const std::string text = backend.generate(call);
    ArchResponse resp = parse_architect_response(text, space, state.current_arch);

    if (transcript != nullptr)
        transcript->step(iteration_history.back().iteration_index, 0, "architecture_update",
                         json{{"request", request_to_json(call.request)},
                              {"response", text},
                              {"parse_failed", resp.parse_failed},
                              {"arch",
                               {{"layer_widths", resp.arch.layer_widths},
                                {"dropout", resp.arch.dropout},
                                {"activation", to_string(resp.arch.activation)}}}});
    return resp.arch;
}

std::vector<RunRecord> run_lgt(const RunContext& ctx, Backend& backend) {
    TranscriptWriter transcript;
    if (!ctx.transcript_path.empty()) transcript = TranscriptWriter(ctx.transcript_path);

    BudgetLedger ledger{ctx.budget.max_configurations, 0};
    PromptState advisor_prompt{prompts::kAdvisorBase, {}};
    ArchSpec arch = default_config(ctx.space, ctx.fit.task).arch;

    std::vector<RunRecord> records;
    const int iterations = std::max(1, ctx.budget.iterations);
    for (int it = 1; it <= iterations; ++it) {
        if (!ledger.can_train()) break;
        if (it > 1) arch = optimize_architecture(records, ctx.space, backend, &transcript);
        records.push_back(
            run_lgt_iteration(ctx, arch, advisor_prompt, backend, ledger, transcript, it));
        if (records.back().status != "ok") break;
    }
    return records;
}

// ---------------------------------------------------------------------------
// single-configuration training (baseline plumbing)

RunRecord train_single_config(const RunContext& ctx, const Configuration& config,
                              std::uint64_t stream, BudgetLedger& ledger,
                              TranscriptWriter* transcript, int iteration_index) {
    RunRecord record = make_record_shell(ctx, iteration_index);
    if (!ledger.can_train()) {
        record.status = "failed";
        record.error = "configuration budget exhausted";
        record.configs_trained = 0;
        return record;
    }
    ledger.consume();
    record.configs_trained = 1;

    const int total_epochs = ctx.budget.epochs_per_evaluation;
    const TaskType task = ctx.fit.task;
    const int output_dim = task == TaskType::classification ? ctx.fit.n_classes : 1;

    SeededRng init_rng(mix_seed(ctx.seed, mix_seed(1000, stream)));
    SeededRng train_rng(mix_seed(ctx.seed, mix_seed(2000, stream)));

    try {
        MlpModel model = build_model(config.arch, ctx.fit.n_features(), output_dim, init_rng);
        OptimizerState opt_state;
        for (int t = 1; t <= total_epochs; ++t) {
            EpochMetrics metrics =
                train_epoch(model, ctx.fit, ctx.val, config, t - 1, total_epochs, opt_state, train_rng);
            record.epoch_test_loss.push_back(evaluate_model(model, ctx.test).loss);
            if (transcript != nullptr)
                transcript->step(iteration_index, t, "train", json{{"metrics", metrics.to_json()}});

            HistoryEntry entry;
            entry.epoch = t;
            entry.config = config;
            entry.delta_applied = ConfigDelta::none();
            entry.metrics = metrics;
            entry.success_bit = false;
            record.history = append_history(std::move(record.history), std::move(entry));
            if (transcript != nullptr)
                transcript->step(iteration_index, t, "history_append",
                                 json{{"history_size", static_cast<int>(record.history.size())}});
        }
        const EvalOutcome final_eval = evaluate_model(model, ctx.test);
        record.final_test_metrics = final_eval.metrics;
        record.final_test_loss = final_eval.loss;
    } catch (const std::exception& e) {
        record.status = "failed";
        record.error = e.what();
    }
    return record;
}

}  // namespace lgt

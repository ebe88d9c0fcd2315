// SPDX-License-Identifier: Apache-2.0
#include "lgt/baselines.hpp"

#include <limits>

namespace lgt {

using nlohmann::json;

json SearchEval::to_json() const {
    return json{{"config", config.to_json()},
                {"final_val_loss", final_val_loss},
                {"test_metrics", test_metrics.to_json()},
                {"final_test_loss", final_test_loss},
                {"failed", failed}};
}

json SearchResult::to_json() const {
    json evals = json::array();
    for (const auto& e : evaluated) evals.push_back(e.to_json());
    return json{{"evaluated", evals}, {"best", best}, {"budget_used", budget_used}};
}

RunRecord run_no_tuning(const RunContext& ctx) {
    TranscriptWriter transcript;
    if (!ctx.transcript_path.empty()) transcript = TranscriptWriter(ctx.transcript_path);
    BudgetLedger ledger{ctx.budget.max_configurations, 0};
    const Configuration config = default_config(ctx.space, ctx.fit.task);
    return train_single_config(ctx, config, /*stream=*/0,
                               ledger, ctx.transcript_path.empty() ? nullptr : &transcript);
}

static std::pair<RunRecord, SearchResult> run_search(const RunContext& ctx,
                                                     const std::vector<Configuration>& candidates) {
    TranscriptWriter transcript;
    if (!ctx.transcript_path.empty()) transcript = TranscriptWriter(ctx.transcript_path);
    TranscriptWriter* tw = ctx.transcript_path.empty() ? nullptr : &transcript;

    BudgetLedger ledger{ctx.budget.max_configurations, 0};
    SearchResult result;
    std::vector<RunRecord> records;

    for (std::size_t idx = 0; idx < candidates.size() && ledger.can_train(); ++idx) {
        RunRecord rec = train_single_config(ctx, candidates[idx], /*stream=*/idx + 1, ledger, tw,
                                            static_cast<int>(idx) + 1);
        SearchEval eval;
        eval.config = candidates[idx];
        eval.failed = rec.status != "ok";
        if (!eval.failed) {
            eval.final_val_loss = rec.history.back().metrics.val_loss;
            eval.test_metrics = rec.final_test_metrics;
            eval.final_test_loss = rec.final_test_loss;
        } else {
            eval.final_val_loss = std::numeric_limits<double>::infinity();
        }
        result.evaluated.push_back(std::move(eval));
        records.push_back(std::move(rec));
    }
    result.budget_used = ledger.used;

    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
        if (result.evaluated[i].failed) continue;
        if (result.evaluated[i].final_val_loss < best_loss) {
            best_loss = result.evaluated[i].final_val_loss;
            result.best = static_cast<int>(i);
        }
    }

    RunRecord record;
    if (result.best >= 0) {
        record = records[static_cast<std::size_t>(result.best)];
    } else if (!records.empty()) {
        record = records.front();  // everything failed; keep the first for the audit trail
        record.status = "failed";
    } else {
        record = train_single_config(ctx, default_config(ctx.space, ctx.fit.task), 0, ledger, tw);
        record.status = "failed";
        record.error = "no candidate configurations within budget";
    }
    record.method = ctx.method;
    record.iteration_index = 1;
    record.configs_trained = result.budget_used;
    return {std::move(record), std::move(result)};
}

std::pair<RunRecord, SearchResult> run_random_search(const RunContext& ctx) {
    SeededRng rng(mix_seed(ctx.seed, 0xA11CE));
    std::vector<Configuration> candidates;
    for (int i = 0; i < ctx.budget.max_configurations; ++i)
        candidates.push_back(sample_random(ctx.space, rng));
    return run_search(ctx, candidates);
}

std::pair<RunRecord, SearchResult> run_grid_search(const RunContext& ctx,
                                                   const std::map<std::string, int>& resolution) {
    std::vector<Configuration> grid = enumerate_grid(ctx.space, resolution);
    return run_search(ctx, grid);
}

}  // namespace lgt

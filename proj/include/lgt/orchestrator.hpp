// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgt/backend.hpp"
#include "lgt/config_space.hpp"
#include "lgt/data_io.hpp"
#include "lgt/dataset.hpp"
#include "lgt/metrics.hpp"
#include "lgt/transcript.hpp"

namespace lgt {

/// The advisor prompt as recorded in history: hash of the immutable base text
/// (the full text lives in the prompt assets and the transcript) plus the
/// guidance notes verbatim.
struct PromptSnapshot {
    std::string base_hash;
    std::vector<std::string> notes;

    static PromptSnapshot of(const PromptState& p);
    nlohmann::json to_json() const;
    static PromptSnapshot from_json(const nlohmann::json& j);
};

/// One epoch's tuple: the configuration trained, the delta the advisor
/// produced, what actually got applied, the metrics, the evaluator's verdict,
/// the prompt in force, and the three agents' rationales verbatim.
struct HistoryEntry {
    int epoch = 0;  // 1-based, contiguous
    Configuration config;
    ConfigDelta delta_applied;
    ApplyReport apply_report;
    EpochMetrics metrics;
    bool success_bit = false;
    PromptSnapshot advisor_prompt_snapshot;
    std::string advisor_rationale;
    std::string evaluator_rationale;
    std::string optimizer_rationale;

    nlohmann::json to_json() const;
    static HistoryEntry from_json(const nlohmann::json& j);
};

using History = std::vector<HistoryEntry>;

/// Append-only history update; rejects non-contiguous epochs.
History append_history(History history, HistoryEntry entry);

/// Configuration-evaluation budget shared by every method.
struct Budget {
    int max_configurations = 50;
    int epochs_per_evaluation = 10;
    int iterations = 3;  // outer architecture-level loop count (lgt only)

    nlohmann::json to_json() const;
    static Budget from_json(const nlohmann::json& j);
};

/// Tracks configurations consumed within one (method, seed) run.
struct BudgetLedger {
    int max_configurations = 50;
    int used = 0;
    bool can_train() const { return used < max_configurations; }
    void consume() { ++used; }
};

/// Everything a runner needs: the standardized splits, the space, budget,
/// and output wiring.
struct RunContext {
    std::string method;
    std::uint64_t seed = 42;
    DatasetManifest manifest;
    Dataset fit;   // training subset the model fits on
    Dataset val;   // held-out validation the agents see
    Dataset test;  // untouched until the final evaluation
    ConfigurationSpace space;
    Budget budget;
    std::string transcript_path;  // empty -> no transcript written
};

/// One per trained configuration evaluation (for LGT, one per iteration).
struct RunRecord {
    int schema_version = 1;
    std::string method;
    std::uint64_t seed = 42;
    int iteration_index = 1;
    std::string dataset_name;
    std::string dataset_hash;
    TaskType task = TaskType::classification;
    Budget budget;
    int configs_trained = 1;
    std::string status = "ok";  // "ok" | "failed"
    History history;
    std::vector<double> epoch_test_loss;  // per-epoch test loss, reporting only
    MetricSet final_test_metrics;
    double final_test_loss = 0.0;
    std::string transcript_path;
    std::string error;  // set when status == "failed"

    nlohmann::json to_json() const;
    static RunRecord from_json(const nlohmann::json& j);
};

/// One T-epoch iteration of the epoch-level loop: per epoch, exactly
/// train -> advise -> apply -> evaluate -> prompt-update -> history-append,
/// architecture fixed, final model evaluated once on the test split.
RunRecord run_lgt_iteration(const RunContext& ctx, const ArchSpec& arch,
                            PromptState& advisor_prompt, Backend& backend, BudgetLedger& ledger,
                            TranscriptWriter& transcript, int iteration_index);

/// The full run: `budget.iterations` iterations with the architecture
/// re-optimized between them from the completed iterations' records. The
/// advisor prompt persists across iterations and resets per run.
std::vector<RunRecord> run_lgt(const RunContext& ctx, Backend& backend);

/// Picks the next iteration's architecture from completed iteration records.
/// Parse failures degrade to the previous architecture.
ArchSpec optimize_architecture(const std::vector<RunRecord>& iteration_history,
                               const ConfigurationSpace& space, Backend& backend,
                               TranscriptWriter* transcript = nullptr);

/// Shared plumbing for the baselines: trains one fixed configuration for
/// `budget.epochs_per_evaluation` epochs with no agent in the loop.
RunRecord train_single_config(const RunContext& ctx, const Configuration& config,
                              std::uint64_t stream, BudgetLedger& ledger,
                              TranscriptWriter* transcript, int iteration_index = 1);

}  // namespace lgt

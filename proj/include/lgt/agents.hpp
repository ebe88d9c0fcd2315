// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lgt/config_space.hpp"
#include "lgt/metrics.hpp"
#include "lgt/prompts.hpp"

namespace lgt {

/// Immutable role instructions plus an ordered, bounded list of guidance
/// notes. Only the notes evolve; base_text is fixed at construction.
struct PromptState {
    std::string base_text;
    std::vector<std::string> guidance_notes;

    nlohmann::json to_json() const;  // base-text hash + notes (canonical form)
    bool operator==(const PromptState&) const = default;
};

struct AdvisorState {
    EpochMetrics current_metrics;
    std::vector<EpochMetrics> recent_metrics;  // ordered by epoch, length <= window
    Configuration current_config;
    std::string space_summary;

    nlohmann::json to_json() const;
};

struct EvaluatorState {
    EpochMetrics current_metrics;
    Configuration current_config;
    EpochMetrics baseline_metrics;  // the iteration's epoch-1 snapshot
    Configuration baseline_config;

    nlohmann::json to_json() const;
};

/// One digest line per epoch for the prompt optimizer.
struct HistoryDigestEntry {
    int epoch = 0;
    double val_loss = 0.0;
    double primary_metric = 0.0;
    bool success = false;
    std::string delta_summary;
};

struct OptimizerAgentState {
    std::vector<HistoryDigestEntry> digest;  // covers every epoch so far exactly once
    EpochMetrics current_metrics;

    nlohmann::json to_json() const;
};

/// Per-iteration summary fed to the architecture agent between iterations.
struct IterationSummary {
    int index = 0;
    ArchSpec arch;
    double first_train_loss = 0.0;
    double final_train_loss = 0.0;
    double final_val_loss = 0.0;
    double mean_overfit_gap = 0.0;  // train/val accuracy gap (or val/train loss ratio - 1)
    double final_primary = 0.0;
};

struct ArchitectState {
    TaskType task = TaskType::classification;
    ArchSpec current_arch;
    std::vector<IterationSummary> iterations;

    nlohmann::json to_json() const;
};

// ---------------------------------------------------------------------------
// parsed agent responses

struct ConfigDeltaResponse {
    ConfigDelta delta;  // no_change on parse failure
    std::string rationale;
    std::vector<std::string> warnings;
    bool parse_failed = false;
};

struct EvalResponse {
    bool success = false;  // conservative default
    std::string rationale;
    bool parse_failed = false;
};

struct NoteOp {
    enum class Kind { append, replace };
    Kind kind = Kind::append;
    int index = 0;  // replace only
    std::string note;
    bool operator==(const NoteOp&) const = default;
};

struct PromptDeltaResponse {
    std::vector<NoteOp> ops;
    std::string rationale;
    std::vector<std::string> warnings;
    bool parse_failed = false;

    nlohmann::json to_json() const;  // canonical {"note_ops":[...]}
};

struct ArchResponse {
    ArchSpec arch;
    std::string rationale;
    bool parse_failed = false;
};

// ---------------------------------------------------------------------------
// operations

/// Builds the advisor state from at least one epoch of metrics; keeps the
/// last `prompts::kMetricWindow` epochs.
AdvisorState build_advisor_state(const std::vector<EpochMetrics>& history,
                                 const Configuration& config, const ConfigurationSpace& space);

/// Rendered prompt split into the chat roles: system carries the immutable
/// base text, user carries the guidance notes and the state block. full() is
/// their concatenation.
struct RenderedPrompt {
    std::string system_text;
    std::string user_text;
    std::string full() const { return system_text + user_text; }
};

RenderedPrompt render_prompt_parts(const PromptState& prompt, const nlohmann::json& state_json,
                                   int char_budget = prompts::kPromptCharBudget);

/// Deterministic concatenation: base text, guidance notes in order, then the
/// state as fenced JSON. When the result exceeds char_budget, the oldest
/// entries of the state's metric/history arrays are elided first.
std::string render_prompt(const PromptState& prompt, const nlohmann::json& state_json,
                          int char_budget = prompts::kPromptCharBudget);

/// Total parsers over untrusted text: they extract the first well-formed JSON
/// object matching their schema and never throw. Failures degrade to
/// conservative defaults (no_change / success=false / empty op list).
ConfigDeltaResponse parse_advisor_response(const std::string& text, const ConfigurationSpace& space);
EvalResponse parse_evaluator_response(const std::string& text);
PromptDeltaResponse parse_optimizer_response(const std::string& text);
/// On failure returns `previous` unchanged; widths/dropout are clamped into
/// the space's architecture bounds.
ArchResponse parse_architect_response(const std::string& text, const ConfigurationSpace& space,
                                      const ArchSpec& previous);

/// Applies note operations under the capacity bound: appends evict the oldest
/// note when full; out-of-range replaces are skipped.
PromptState apply_prompt_delta(const PromptState& prompt, const PromptDeltaResponse& delta);

}  // namespace lgt

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "lgt/orchestrator.hpp"

namespace lgt {

struct SearchEval {
    Configuration config;
    double final_val_loss = 0.0;
    MetricSet test_metrics;
    double final_test_loss = 0.0;
    bool failed = false;

    nlohmann::json to_json() const;
};

/// Every evaluated configuration plus the index of the best one
/// (minimum final validation loss among the non-failed evaluations).
struct SearchResult {
    std::vector<SearchEval> evaluated;
    int best = -1;
    int budget_used = 0;

    nlohmann::json to_json() const;
};

/// Trains the default configuration once; consumes one configuration.
RunRecord run_no_tuning(const RunContext& ctx);

/// Samples up to budget.max_configurations configurations, trains each for
/// epochs_per_evaluation epochs, keeps the best by validation loss. Failed
/// trainings are recorded, skipped for selection, and still consume budget.
std::pair<RunRecord, SearchResult> run_random_search(const RunContext& ctx);

/// Same protocol over the enumerated grid, truncated at the budget in
/// deterministic grid order.
std::pair<RunRecord, SearchResult> run_grid_search(const RunContext& ctx,
                                                   const std::map<std::string, int>& resolution);

}  // namespace lgt

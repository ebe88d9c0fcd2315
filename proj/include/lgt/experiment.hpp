// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "lgt/backend.hpp"
#include "lgt/baselines.hpp"
#include "lgt/orchestrator.hpp"

namespace lgt {

/// One experiment: a dataset, the methods to compare, seeds, budget, backend.
struct ExperimentConfig {
    DatasetManifest dataset;
    std::vector<std::string> methods{"no_tuning", "lgt"};  // no_tuning|random|grid|lgt
    std::vector<std::uint64_t> seeds{42, 43, 44, 45, 46, 47, 48, 49, 50, 51};
    Budget budget;
    BackendConfig backend;
    std::map<std::string, int> grid_resolution{{"learning_rate", 5}, {"hidden_width", 2}};
    std::string output_dir = "lgt-out";

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    int n_failed = 0;
};

/// Builds the per-seed splits once (shared by every method at that seed),
/// runs each (method, seed) pair, and writes records/transcripts under
/// output_dir. A failed run is recorded and does not abort the others.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Prepares the standardized fit/val/test splits and the space for one seed.
RunContext make_run_context(const ExperimentConfig& config, const std::string& method,
                            std::uint64_t seed);

/// Report files: summary.csv (per-method metric mean/std over seeds),
/// curves/*.csv (per-epoch train/test loss), deltas.csv (every applied
/// configuration change with rationale), summary.txt. Rejects record sets
/// that mix task types.
void emit_report(const std::vector<RunRecord>& records, const std::string& out_dir);

/// Loads every *.json RunRecord under dir/records (or dir itself).
std::vector<RunRecord> load_records(const std::string& dir);

}  // namespace lgt

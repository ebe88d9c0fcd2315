// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "lgt/dataset.hpp"
#include "lgt/matrix.hpp"

namespace lgt {

/// Task metrics. Classification fills accuracy/macro_f1/auc (auc is empty
/// when undefined, e.g. a single-class target vector); regression fills
/// mae/mse/r2.
struct MetricSet {
    TaskType task = TaskType::classification;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::optional<double> auc;
    double mae = 0.0;
    double mse = 0.0;
    double r2 = 0.0;

    /// Higher-is-better headline metric (accuracy or r2).
    double primary() const { return task == TaskType::classification ? accuracy : r2; }

    nlohmann::json to_json() const;
    static MetricSet from_json(const nlohmann::json& j);
    bool operator==(const MetricSet&) const = default;
};

/// Per-epoch record: the configured training loss over the epoch's batches,
/// the task-canonical validation loss (unweighted cross-entropy or MSE, so
/// values are comparable across configurations), and metric sets for both
/// splits. wall_time_ms is transcript-only and never part of the canonical
/// run-record serialization.
struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    MetricSet metric_set;        // validation split
    MetricSet train_metric_set;  // fit split, evaluated after the epoch
    std::int64_t wall_time_ms = 0;

    nlohmann::json to_json() const;  // canonical: no wall time
    static EpochMetrics from_json(const nlohmann::json& j);
};

/// Computes the metric suite for a task. predictions: class probabilities
/// (n x k) for classification, point predictions (n x 1) for regression.
MetricSet compute_metrics(TaskType task, const Matrix& predictions,
                          const std::vector<double>& targets);

}  // namespace lgt

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lgt/config_space.hpp"
#include "lgt/dataset.hpp"
#include "lgt/losses.hpp"
#include "lgt/metrics.hpp"
#include "lgt/model.hpp"
#include "lgt/optimizers.hpp"
#include "lgt/rng.hpp"

namespace lgt {

/// Eval-mode pass over a dataset: canonical loss plus the metric suite.
struct EvalOutcome {
    double loss = 0.0;  // task-canonical (unweighted cross-entropy / MSE)
    MetricSet metrics;
};

EvalOutcome evaluate_model(const MlpModel& model, const Dataset& data);

/// One full training pass in shuffled mini-batches: augmentation pipeline,
/// scheduled learning rate, configured loss/optimizer, dropout in training
/// mode only. Validation metrics come from an eval-mode pass over `val`.
/// epoch_index is 0-based and must be < total_epochs.
EpochMetrics train_epoch(MlpModel& model, const Dataset& fit, const Dataset& val,
                         const Configuration& config, int epoch_index, int total_epochs,
                         OptimizerState& opt_state, SeededRng& rng);

}  // namespace lgt

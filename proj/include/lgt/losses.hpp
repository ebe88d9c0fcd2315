// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "lgt/config_space.hpp"
#include "lgt/matrix.hpp"

namespace lgt {

/// Mean-reduced loss and its gradient with respect to the network outputs
/// (logits for classification, point predictions for regression).
/// Class weights multiply each sample's loss by the true class's weight.
struct LossResult {
    double loss = 0.0;
    Matrix grad;  // same shape as outputs
};

LossResult loss_and_grad(LossKind kind, const Matrix& outputs, const std::vector<double>& targets,
                         const HyperSpec& hyper);

/// Unweighted task-canonical loss (cross-entropy or MSE), used for the
/// comparable validation-loss series.
double canonical_loss(TaskType task, const Matrix& outputs, const std::vector<double>& targets);

}  // namespace lgt

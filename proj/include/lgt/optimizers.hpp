// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "lgt/config_space.hpp"
#include "lgt/matrix.hpp"

namespace lgt {

struct MlpModel;

/// Parameter gradients shaped like the model.
struct Grads {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

/// Slots for the active optimizer. Reinitialized whenever the optimizer kind
/// or the parameter shapes change (e.g. after an agent switches adam->adamw).
struct OptimizerState {
    OptimizerKind kind = OptimizerKind::adam;
    std::int64_t step = 0;
    std::vector<Matrix> m_w, v_w;                      // first/second moments (adam/adamw), momentum (sgd uses m_w)
    std::vector<std::vector<double>> m_b, v_b;

    /// Makes the slots match `model` and `kind`; resets them if they do not.
    void ensure(const MlpModel& model, OptimizerKind k);
};

/// One optimizer step in place.
///  - sgd: theta -= lr * (g + wd * theta)
///  - adam: bias-corrected moments; weight_decay is ignored
///  - adamw: decoupled decay theta *= (1 - lr*wd), then the adam update
void optimizer_step(MlpModel& model, const Grads& grads, OptimizerState& state, double lr,
                    double weight_decay);

}  // namespace lgt

// SPDX-License-Identifier: Apache-2.0
#include "lgt/optimizers.hpp"

#include <cmath>
#include <stdexcept>

#include "lgt/model.hpp"

namespace lgt {

static constexpr double kBeta1 = 0.9;
static constexpr double kBeta2 = 0.999;
static constexpr double kEps = 1e-8;

void OptimizerState::ensure(const MlpModel& model, OptimizerKind k) {
    bool shapes_ok = kind == k && m_w.size() == model.weights.size();
    if (shapes_ok) {
        for (std::size_t l = 0; l < m_w.size(); ++l)
            if (!m_w[l].same_shape(model.weights[l])) {
                shapes_ok = false;
                break;
            }
    }
    if (shapes_ok) return;

    kind = k;
    step = 0;
    m_w.clear();
    v_w.clear();
    m_b.clear();
    v_b.clear();
    for (const auto& w : model.weights) m_w.emplace_back(w.rows, w.cols);
    for (const auto& w : model.weights) v_w.emplace_back(w.rows, w.cols);
    for (const auto& b : model.biases) m_b.emplace_back(b.size(), 0.0);
    for (const auto& b : model.biases) v_b.emplace_back(b.size(), 0.0);
}

static void step_params(OptimizerKind kind, double* theta, const double* grad, double* m, double* v,
                        std::size_t n, double lr, double wd, double bc1, double bc2) {
    switch (kind) {
        case OptimizerKind::sgd:
            for (std::size_t i = 0; i < n; ++i) theta[i] -= lr * (grad[i] + wd * theta[i]);
            break;
        case OptimizerKind::adam:
            for (std::size_t i = 0; i < n; ++i) {
                const double g = grad[i];
                m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
                v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
                theta[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
            }
            break;
        case OptimizerKind::adamw:
            for (std::size_t i = 0; i < n; ++i) {
                theta[i] *= 1.0 - lr * wd;  // decoupled decay, exact shrink factor
                const double g = grad[i];
                m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
                v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
                theta[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
            }
            break;
    }
}

void optimizer_step(MlpModel& model, const Grads& grads, OptimizerState& state, double lr,
                    double weight_decay) {
    if (grads.weights.size() != model.weights.size() || grads.biases.size() != model.biases.size())
        throw std::invalid_argument("optimizer_step: gradient/model layer mismatch");
    for (std::size_t l = 0; l < model.weights.size(); ++l)
        if (!grads.weights[l].same_shape(model.weights[l]) ||
            grads.biases[l].size() != model.biases[l].size())
            throw std::invalid_argument("optimizer_step: gradient shape mismatch");

    state.ensure(model, state.kind);
    ++state.step;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));

    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        step_params(state.kind, model.weights[l].data.data(), grads.weights[l].data.data(),
                    state.m_w[l].data.data(), state.v_w[l].data.data(), model.weights[l].data.size(),
                    lr, weight_decay, bc1, bc2);
        step_params(state.kind, model.biases[l].data(), grads.biases[l].data(), state.m_b[l].data(),
                    state.v_b[l].data(), model.biases[l].size(), lr, weight_decay, bc1, bc2);
    }
}

}  // namespace lgt

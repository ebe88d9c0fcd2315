// SPDX-License-Identifier: Apache-2.0
#include "lgt/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "lgt/kernels.hpp"

namespace lgt {

static constexpr double kProbFloor = 1e-12;

static void check_shapes(const Matrix& outputs, const std::vector<double>& targets, bool classification,
                         const HyperSpec& hyper) {
    if (outputs.rows != static_cast<int>(targets.size()))
        throw std::invalid_argument("loss_and_grad: outputs/targets row mismatch");
    if (classification) {
        if (outputs.cols < 2) throw std::invalid_argument("loss_and_grad: classification needs >= 2 logit columns");
        if (!hyper.class_weights.empty() &&
            static_cast<int>(hyper.class_weights.size()) != outputs.cols)
            throw std::invalid_argument("loss_and_grad: class_weights length must equal class count");
    } else {
        if (outputs.cols != 1) throw std::invalid_argument("loss_and_grad: regression expects one output column");
    }
}

static double class_weight(const HyperSpec& hyper, int cls) {
    return hyper.class_weights.empty() ? 1.0 : hyper.class_weights[static_cast<std::size_t>(cls)];
}

// Softmax losses. Focal is -w_y * (1 - p_y)^gamma * log(p_y); gamma 0 reduces
// to weighted cross-entropy. Gradients flow through p_y only:
//   dL/dz_j = dL/dp_y * p_y * (delta_{yj} - p_j).
static LossResult softmax_loss(const Matrix& logits, const std::vector<double>& targets,
                               const HyperSpec& hyper, double gamma) {
    const int n = logits.rows;
    const int k = logits.cols;
    Matrix probs = kernels::softmax_rows(logits);
    LossResult out;
    out.grad = Matrix(n, k);

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const int y = static_cast<int>(targets[static_cast<std::size_t>(i)]);
        if (y < 0 || y >= k) throw std::invalid_argument("loss_and_grad: target class out of range");
        const double w = class_weight(hyper, y);
        const double pt = std::clamp(probs(i, y), kProbFloor, 1.0 - kProbFloor);
        const double log_pt = std::log(pt);
        const double u = 1.0 - pt;

        if (gamma == 0.0) {
            total += -w * log_pt;
            for (int j = 0; j < k; ++j) {
                const double indicator = j == y ? 1.0 : 0.0;
                out.grad(i, j) = w * (probs(i, j) - indicator) / n;
            }
        } else {
            const double u_gamma = std::pow(u, gamma);
            total += -w * u_gamma * log_pt;
            // dL/dpt = w * (gamma * u^(gamma-1) * log(pt) - u^gamma / pt)
            const double dl_dpt = w * (gamma * std::pow(u, gamma - 1.0) * log_pt - u_gamma / pt);
            for (int j = 0; j < k; ++j) {
                const double indicator = j == y ? 1.0 : 0.0;
                out.grad(i, j) = dl_dpt * pt * (indicator - probs(i, j)) / n;
            }
        }
    }
    out.loss = total / n;
    return out;
}

static LossResult regression_loss(LossKind kind, const Matrix& preds,
                                  const std::vector<double>& targets) {
    const int n = preds.rows;
    LossResult out;
    out.grad = Matrix(n, 1);
    double total = 0.0;
    constexpr double huber_delta = 1.0;
    for (int i = 0; i < n; ++i) {
        const double e = preds(i, 0) - targets[static_cast<std::size_t>(i)];
        switch (kind) {
            case LossKind::mse:
                total += e * e;
                out.grad(i, 0) = 2.0 * e / n;
                break;
            case LossKind::mae:
                total += std::abs(e);
                out.grad(i, 0) = (e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0)) / n;
                break;
            case LossKind::huber:
                if (std::abs(e) <= huber_delta) {
                    total += 0.5 * e * e;
                    out.grad(i, 0) = e / n;
                } else {
                    total += huber_delta * (std::abs(e) - 0.5 * huber_delta);
                    out.grad(i, 0) = huber_delta * (e > 0.0 ? 1.0 : -1.0) / n;
                }
                break;
            default:
                throw std::invalid_argument("regression_loss: not a regression loss");
        }
    }
    out.loss = total / n;
    return out;
}

LossResult loss_and_grad(LossKind kind, const Matrix& outputs, const std::vector<double>& targets,
                         const HyperSpec& hyper) {
    switch (kind) {
        case LossKind::cross_entropy:
            check_shapes(outputs, targets, true, hyper);
            return softmax_loss(outputs, targets, hyper, 0.0);
        case LossKind::focal:
            check_shapes(outputs, targets, true, hyper);
            return softmax_loss(outputs, targets, hyper, hyper.focal_gamma);
        case LossKind::mse:
        case LossKind::mae:
        case LossKind::huber:
            check_shapes(outputs, targets, false, hyper);
            return regression_loss(kind, outputs, targets);
    }
    throw std::invalid_argument("loss_and_grad: unknown loss kind");
}

double canonical_loss(TaskType task, const Matrix& outputs, const std::vector<double>& targets) {
    HyperSpec plain;  // uniform weights
    if (task == TaskType::classification)
        return loss_and_grad(LossKind::cross_entropy, outputs, targets, plain).loss;
    return loss_and_grad(LossKind::mse, outputs, targets, plain).loss;
}

}  // namespace lgt

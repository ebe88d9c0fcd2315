// SPDX-License-Identifier: Apache-2.0
#include "lgt/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "lgt/augment.hpp"
#include "lgt/kernels.hpp"
#include "lgt/schedulers.hpp"

namespace lgt {

EvalOutcome evaluate_model(const MlpModel& model, const Dataset& data) {
    EvalOutcome out;
    Matrix logits = forward(model, data.features, /*training=*/false, nullptr, nullptr);
    out.loss = canonical_loss(data.task, logits, data.targets);
    if (data.task == TaskType::classification) {
        Matrix probs = kernels::softmax_rows(logits);
        out.metrics = compute_metrics(data.task, probs, data.targets);
    } else {
        out.metrics = compute_metrics(data.task, logits, data.targets);
    }
    return out;
}

static void check_dims(const MlpModel& model, const Dataset& d) {
    if (model.input_dim != d.n_features())
        throw std::invalid_argument("train_epoch: model input_dim does not match dataset features");
    const int expected_out = d.task == TaskType::classification ? d.n_classes : 1;
    if (model.output_dim != expected_out)
        throw std::invalid_argument("train_epoch: model output_dim does not match task");
}

EpochMetrics train_epoch(MlpModel& model, const Dataset& fit, const Dataset& val,
                         const Configuration& config, int epoch_index, int total_epochs,
                         OptimizerState& opt_state, SeededRng& rng) {
    const auto t0 = std::chrono::steady_clock::now();
    check_dims(model, fit);
    check_dims(model, val);

    const Dataset augmented = apply_feature_pipeline(config.feature, fit, rng);
    const double lr = scheduled_lr(config.strategy.scheduler, config.hyper.learning_rate,
                                   epoch_index, total_epochs, config.strategy.scheduler_params);
    const int n = augmented.n_samples();
    const int batch_size = std::max(1, config.hyper.batch_size);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    opt_state.ensure(model, config.strategy.optimizer);

    double loss_sum = 0.0;
    for (int start = 0; start < n; start += batch_size) {
        const int b = std::min(batch_size, n - start);
        Matrix xb(b, augmented.n_features());
        std::vector<double> yb(static_cast<std::size_t>(b));
        for (int i = 0; i < b; ++i) {
            const int src = order[static_cast<std::size_t>(start + i)];
            for (int j = 0; j < augmented.n_features(); ++j) xb(i, j) = augmented.features(src, j);
            yb[static_cast<std::size_t>(i)] = augmented.targets[static_cast<std::size_t>(src)];
        }

        ForwardCache cache;
        Matrix out = forward(model, xb, /*training=*/true, &rng, &cache);
        LossResult lr_res = loss_and_grad(config.strategy.loss, out, yb, config.hyper);
        Grads grads = backward(model, cache, lr_res.grad);
        optimizer_step(model, grads, opt_state, lr, config.hyper.weight_decay);

        loss_sum += lr_res.loss * b;
    }

    EpochMetrics em;
    em.epoch = epoch_index + 1;
    em.train_loss = loss_sum / n;
    const EvalOutcome val_eval = evaluate_model(model, val);
    em.val_loss = val_eval.loss;
    em.metric_set = val_eval.metrics;
    em.train_metric_set = evaluate_model(model, fit).metrics;
    em.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    return em;
}

}  // namespace lgt

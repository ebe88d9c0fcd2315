// SPDX-License-Identifier: Apache-2.0
#include "lgt/schedulers.hpp"

#include <cmath>
#include <stdexcept>

namespace lgt {

static double param_or(const std::map<std::string, double>& params, const std::string& name) {
    auto it = params.find(name);
    return it != params.end() ? it->second : default_method_param(name);
}

double scheduled_lr(SchedulerKind kind, double base_lr, int epoch, int total_epochs,
                    const std::map<std::string, double>& params) {
    if (epoch < 0 || epoch >= total_epochs)
        throw std::invalid_argument("scheduled_lr: epoch out of range");
    switch (kind) {
        case SchedulerKind::constant:
            return base_lr;
        case SchedulerKind::step_decay: {
            const double gamma = param_or(params, "step_gamma");
            const int every = std::max(1, static_cast<int>(param_or(params, "step_every")));
            return base_lr * std::pow(gamma, static_cast<double>(epoch / every));
        }
        case SchedulerKind::cosine: {
            const double min_lr = param_or(params, "min_lr");
            if (total_epochs <= 1) return base_lr;
            const double t = static_cast<double>(epoch) / (total_epochs - 1);
            return min_lr + 0.5 * (base_lr - min_lr) * (1.0 + std::cos(3.14159265358979323846 * t));
        }
    }
    return base_lr;
}

}  // namespace lgt

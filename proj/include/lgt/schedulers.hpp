// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "lgt/config_space.hpp"

namespace lgt {

/// Learning rate for a 0-based epoch.
///  - constant:   base_lr
///  - step_decay: base_lr * step_gamma^floor(epoch / step_every)
///  - cosine:     min_lr + 0.5*(base_lr - min_lr)*(1 + cos(pi*epoch/(total-1)))
double scheduled_lr(SchedulerKind kind, double base_lr, int epoch, int total_epochs,
                    const std::map<std::string, double>& params);

}  // namespace lgt

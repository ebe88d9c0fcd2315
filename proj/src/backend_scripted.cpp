// SPDX-License-Identifier: Apache-2.0
//
// The default scripted rule set. Six deterministic heuristics stand in for a
// live model so whole experiments are reproducible offline:
//   1. halve the learning rate after two consecutive validation-loss rises
//   2. switch to focal loss when accuracy outruns macro-F1 by > 0.15
//   3. enable noise augmentation + weight decay on a train/val gap > 0.15
//   4. move adam -> adamw once weight decay is active and the gap persists
//   5. double the learning rate on slow early progress (epoch <= 3, < 2%
//      relative improvement)
//   6. otherwise: explicit no-change
// Evaluator: success iff current validation loss beats the baseline.
// Optimizer: bounded note appends keyed to failure streaks / clear progress.
// Architect: double widths on flat-high training loss; +0.2 dropout on a
// persistent overfit gap; otherwise keep the architecture.
#include <cmath>

#include "lgt/backend.hpp"

namespace lgt {

using nlohmann::json;

namespace {

// --- advisor signals -------------------------------------------------------

bool val_loss_rising_two(const AdvisorState& s) {
    const auto& r = s.recent_metrics;
    const std::size_t n = r.size();
    return n >= 3 && r[n - 1].val_loss > r[n - 2].val_loss && r[n - 2].val_loss > r[n - 3].val_loss;
}

bool overfit_gap(const AdvisorState& s) {
    const EpochMetrics& m = s.current_metrics;
    if (m.metric_set.task == TaskType::classification)
        return m.train_metric_set.accuracy - m.metric_set.accuracy > 0.15;
    const double train_mse = m.train_metric_set.mse;
    return train_mse > 1e-12 && m.metric_set.mse / train_mse > 1.5;
}

bool imbalance_signature(const AdvisorState& s) {
    const MetricSet& v = s.current_metrics.metric_set;
    return v.task == TaskType::classification && v.accuracy - v.macro_f1 > 0.15 &&
           s.current_config.strategy.loss != LossKind::focal;
}

bool slow_early_progress(const AdvisorState& s) {
    const auto& r = s.recent_metrics;
    if (s.current_metrics.epoch > 3 || r.size() < 2) return false;
    const double prev = r[r.size() - 2].val_loss;
    const double cur = r[r.size() - 1].val_loss;
    return (prev - cur) / std::max(prev, 1e-12) < 0.02;
}

json advisor_changes(std::vector<json> changes, const std::string& rationale) {
    json arr = json::array();
    for (auto& c : changes) arr.push_back(std::move(c));
    return json{{"changes", arr}, {"rationale", rationale}};
}

// --- architect signals ------------------------------------------------------

const IterationSummary* last_iteration(const ArchitectState& s) {
    return s.iterations.empty() ? nullptr : &s.iterations.back();
}

bool persistent_underfit(const ArchitectState& s) {
    const IterationSummary* it = last_iteration(s);
    if (it == nullptr) return false;
    const bool flat = it->final_train_loss > 0.8 * it->first_train_loss;
    const bool high =
        s.task == TaskType::classification ? it->final_train_loss > 0.5
                                           : it->final_train_loss > 0.6 * it->first_train_loss;
    return flat && high;
}

bool persistent_overfit(const ArchitectState& s) {
    const IterationSummary* it = last_iteration(s);
    return it != nullptr && it->mean_overfit_gap > 0.15;
}

json architect_response(const ArchSpec& a, const std::string& rationale) {
    return json{{"layer_widths", a.layer_widths},
                {"dropout", a.dropout},
                {"activation", to_string(a.activation)},
                {"rationale", rationale}};
}

}  // namespace

ScriptedRuleSet default_scripted_rules() {
    ScriptedRuleSet rs;

    auto adv = [](const AgentCall& c) { return c.kind == AgentKind::advisor && c.advisor != nullptr; };

    rs.rules.push_back(
        {"advisor.lr_decay_on_plateau",
         [adv](const AgentCall& c) { return adv(c) && val_loss_rising_two(*c.advisor); },
         [](const AgentCall&) {
             return advisor_changes(
                 {json{{"scale_numeric", {{"field", "learning_rate"}, {"factor", 0.5}}}}},
                 "validation loss rose for two consecutive epochs; halving the learning rate");
         }});

    rs.rules.push_back(
        {"advisor.focal_on_imbalance",
         [adv](const AgentCall& c) { return adv(c) && imbalance_signature(*c.advisor); },
         [](const AgentCall&) {
             return advisor_changes(
                 {json{{"set_categorical", {{"field", "loss"}, {"value", "focal"}}}},
                  json{{"set_numeric", {{"field", "focal_gamma"}, {"value", 2.0}}}}},
                 "accuracy outruns macro-F1, suggesting skewed per-class recall; switching to "
                 "focal loss");
         }});

    rs.rules.push_back(
        {"advisor.regularize_on_overfit",
         [adv](const AgentCall& c) {
             return adv(c) && overfit_gap(*c.advisor) &&
                    !c.advisor->current_config.feature.has_method(AugmentMethod::noise);
         },
         [](const AgentCall&) {
             return advisor_changes(
                 {json{{"add_method", "noise"}},
                  json{{"set_numeric", {{"field", "noise_sigma"}, {"value", 0.1}}}},
                  json{{"set_numeric", {{"field", "weight_decay"}, {"value", 0.01}}}}},
                 "train/validation gap exceeds 0.15; enabling noise augmentation and raising "
                 "weight decay");
         }});

    rs.rules.push_back(
        {"advisor.adamw_on_active_decay",
         [adv](const AgentCall& c) {
             // weight decay raised from zero moves in width-floor steps, so
             // any strictly positive value marks it as active
             return adv(c) && overfit_gap(*c.advisor) &&
                    c.advisor->current_config.strategy.optimizer == OptimizerKind::adam &&
                    c.advisor->current_config.hyper.weight_decay > 0.0;
         },
         [](const AgentCall&) {
             return advisor_changes(
                 {json{{"set_categorical", {{"field", "optimizer"}, {"value", "adamw"}}}}},
                 "weight decay is active under adam; switching to adamw for decoupled decay");
         }});

    rs.rules.push_back(
        {"advisor.lr_raise_on_slow_start",
         [adv](const AgentCall& c) { return adv(c) && slow_early_progress(*c.advisor); },
         [](const AgentCall&) {
             return advisor_changes(
                 {json{{"scale_numeric", {{"field", "learning_rate"}, {"factor", 2.0}}}}},
                 "little early progress; doubling the learning rate");
         }});

    rs.rules.push_back({"advisor.no_change",
                        [adv](const AgentCall& c) { return adv(c); },
                        [](const AgentCall&) {
                            return advisor_changes(
                                {json{{"no_change", true}}},
                                "metrics are progressing; keeping the configuration");
                        }});

    // --- evaluator ----------------------------------------------------------

    rs.rules.push_back(
        {"evaluator.compare_baseline",
         [](const AgentCall& c) { return c.kind == AgentKind::evaluator && c.evaluator != nullptr; },
         [](const AgentCall& c) {
             const bool better =
                 c.evaluator->current_metrics.val_loss < c.evaluator->baseline_metrics.val_loss;
             return json{{"success", better},
                         {"reason", better ? "validation loss improved over the baseline"
                                           : "validation loss has not improved over the baseline"}};
         }});

    // --- prompt optimizer ----------------------------------------------------

    auto opt = [](const AgentCall& c) {
        return c.kind == AgentKind::optimizer && c.optimizer != nullptr;
    };

    rs.rules.push_back(
        {"optimizer.note_on_failure_streak",
         [opt](const AgentCall& c) {
             if (!opt(c)) return false;
             const auto& d = c.optimizer->digest;
             if (d.size() < 3 || c.optimizer->current_metrics.epoch % 3 != 0) return false;
             return !d[d.size() - 1].success && !d[d.size() - 2].success && !d[d.size() - 3].success;
         },
         [](const AgentCall&) {
             return json{{"note_ops",
                          json::array({json{{"append",
                                             "Recent changes have not reduced validation loss; "
                                             "prefer smaller, single-field adjustments."}}})},
                         {"rationale", "three unsuccessful epochs in a row"}};
         }});

    rs.rules.push_back(
        {"optimizer.note_on_clear_progress",
         [opt](const AgentCall& c) {
             if (!opt(c)) return false;
             const auto& d = c.optimizer->digest;
             return !d.empty() && c.optimizer->current_metrics.epoch == 5 &&
                    c.optimizer->current_metrics.val_loss <= 0.9 * d.front().val_loss;
         },
         [](const AgentCall&) {
             return json{{"note_ops",
                          json::array({json{{"append",
                                             "Validation loss is trending down; keep changes "
                                             "minimal to avoid destabilizing training."}}})},
                         {"rationale", "validation loss down more than 10% since epoch 1"}};
         }});

    rs.rules.push_back({"optimizer.no_update",
                        [opt](const AgentCall& c) { return opt(c); },
                        [](const AgentCall&) {
                            return json{{"note_ops", json::array()},
                                        {"rationale", "no prompt update warranted"}};
                        }});

    // --- architect -----------------------------------------------------------

    auto arc = [](const AgentCall& c) {
        return c.kind == AgentKind::architect && c.architect != nullptr;
    };

    rs.rules.push_back(
        {"architect.widen_on_underfit",
         [arc](const AgentCall& c) { return arc(c) && persistent_underfit(*c.architect); },
         [](const AgentCall& c) {
             ArchSpec a = c.architect->current_arch;
             for (auto& w : a.layer_widths) w = std::min(512, w * 2);
             return architect_response(a, "training loss stayed high and flat; doubling widths");
         }});

    rs.rules.push_back(
        {"architect.dropout_on_overfit",
         [arc](const AgentCall& c) { return arc(c) && persistent_overfit(*c.architect); },
         [](const AgentCall& c) {
             ArchSpec a = c.architect->current_arch;
             a.dropout = std::min(0.9, a.dropout + 0.2);
             return architect_response(a, "persistent overfit gap; raising dropout");
         }});

    rs.rules.push_back({"architect.keep",
                        [arc](const AgentCall& c) { return arc(c); },
                        [](const AgentCall& c) {
                            return architect_response(c.architect->current_arch,
                                                      "keeping the current architecture");
                        }});

    return rs;
}

std::string scripted_generate(const ScriptedRuleSet& rules, const AgentCall& call) {
    for (const auto& rule : rules.rules)
        if (rule.condition(call)) return rule.response(call).dump();

    // Built-in catch-all keeps scripted generation total for any rule set.
    switch (call.kind) {
        case AgentKind::advisor:
            return advisor_changes({json{{"no_change", true}}}, "catch-all").dump();
        case AgentKind::evaluator:
            return json{{"success", false}, {"reason", "catch-all"}}.dump();
        case AgentKind::optimizer:
            return json{{"note_ops", json::array()}, {"rationale", "catch-all"}}.dump();
        case AgentKind::architect: {
            ArchSpec a = call.architect != nullptr ? call.architect->current_arch : ArchSpec{};
            return architect_response(a, "catch-all").dump();
        }
    }
    return json{{"no_change", true}}.dump();
}

}  // namespace lgt

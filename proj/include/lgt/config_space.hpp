// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lgt/dataset.hpp"
#include "lgt/rng.hpp"

namespace lgt {

enum class LossKind { cross_entropy, focal, mse, mae, huber };
enum class OptimizerKind { sgd, adam, adamw };
enum class SchedulerKind { constant, step_decay, cosine };
enum class Activation { relu, tanh };
enum class AugmentMethod { duplication, rotation, shift, flip, scale, noise, contrast, none };

std::string to_string(LossKind k);
std::string to_string(OptimizerKind k);
std::string to_string(SchedulerKind k);
std::string to_string(Activation a);
std::string to_string(AugmentMethod m);
std::optional<LossKind> loss_from_string(const std::string& s);
std::optional<OptimizerKind> optimizer_from_string(const std::string& s);
std::optional<SchedulerKind> scheduler_from_string(const std::string& s);
std::optional<Activation> activation_from_string(const std::string& s);
std::optional<AugmentMethod> method_from_string(const std::string& s);

/// Hidden-layer architecture: widths of the hidden layers, dropout rate on
/// hidden activations, and the hidden activation function.
struct ArchSpec {
    std::vector<int> layer_widths{64, 64};
    double dropout = 0.2;
    Activation activation = Activation::relu;
    bool operator==(const ArchSpec&) const = default;
};

/// Ordered augmentation pipeline plus per-method numeric parameters
/// (keys like "noise_sigma"; see default_method_param for the vocabulary).
struct FeatureSpec {
    std::vector<AugmentMethod> methods;
    std::map<std::string, double> method_params;
    bool has_method(AugmentMethod m) const;
    bool operator==(const FeatureSpec&) const = default;
};

struct StrategySpec {
    LossKind loss = LossKind::cross_entropy;
    OptimizerKind optimizer = OptimizerKind::adam;
    SchedulerKind scheduler = SchedulerKind::constant;
    std::map<std::string, double> scheduler_params;
    bool operator==(const StrategySpec&) const = default;
};

struct HyperSpec {
    double learning_rate = 0.01;
    double weight_decay = 0.0;
    std::vector<double> class_weights;  // classification only; length = n_classes
    int batch_size = 32;
    double focal_gamma = 2.0;
    bool operator==(const HyperSpec&) const = default;
};

/// A point in the four-dimensional configuration space.
struct Configuration {
    ArchSpec arch;
    FeatureSpec feature;
    StrategySpec strategy;
    HyperSpec hyper;
    bool operator==(const Configuration&) const = default;

    nlohmann::json to_json() const;
    static Configuration from_json(const nlohmann::json& j);
    std::string canonical_string() const;  // compact, sorted keys
};

enum class ConfigDimension { arch, feature, strategy, hyper };

/// Bounds and trust region for one numeric field addressable by name.
/// Names are flat tokens ("learning_rate", "noise_sigma", "class_weight.0",
/// "hidden_width", ...).
struct NumericFieldSpec {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    bool log_scale = false;
    bool is_integer = false;
    double trust_region = 1.0;  // max relative per-epoch change epsilon
    ConfigDimension dim = ConfigDimension::hyper;
};

/// The search space: bounds for every numeric field, vocabularies for every
/// categorical field, the augmentation-method vocabulary, architecture
/// structural bounds, and the per-field trust regions.
struct ConfigurationSpace {
    TaskType task = TaskType::classification;
    int n_classes = 0;
    bool image_data = false;

    int min_layers = 2;
    int max_layers = 5;
    int min_width = 32;
    int max_width = 512;

    std::vector<NumericFieldSpec> numeric_fields;
    std::map<std::string, std::vector<std::string>> categorical_fields;
    std::vector<AugmentMethod> method_vocabulary;

    /// Space with the standard bounds; the loss and method vocabularies are
    /// filtered by task type and data layout.
    static ConfigurationSpace standard(TaskType task, int n_classes, bool image_data = false);

    const NumericFieldSpec* find_numeric(std::string_view name) const;
    bool categorical_allowed(const std::string& field, const std::string& value) const;
    bool method_allowed(AugmentMethod m) const;
    ConfigDimension categorical_dimension(const std::string& field) const;

    /// One line per tunable field with bounds/vocabulary, for agent prompts.
    std::string summary_text() const;

    nlohmann::json to_json() const;
    static ConfigurationSpace from_json(const nlohmann::json& j);
};

/// Reads a flat-named numeric field from a configuration. Unset map-backed
/// params report their documented defaults. nullopt for unknown names.
std::optional<double> get_numeric_field(const Configuration& c, const std::string& name);
/// Writes a flat-named numeric field. Returns false for unknown names.
bool set_numeric_field(Configuration& c, const std::string& name, double value);
/// Default for a map-backed parameter ("noise_sigma" -> 0.1, ...).
double default_method_param(const std::string& name);

struct Violation {
    std::string field;
    std::string value;
    std::string bound;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Total validity check of a configuration against a space.
ValidationResult validate(const Configuration& c, const ConfigurationSpace& space);

/// One typed change within a ConfigDelta.
struct ConfigChange {
    enum class Kind { set_numeric, scale_numeric, set_categorical, add_method, remove_method, no_change };
    Kind kind = Kind::no_change;
    std::string field;      // numeric or categorical field name
    double value = 0.0;     // set_numeric value or scale_numeric factor
    std::string str_value;  // categorical value or method name
    bool operator==(const ConfigChange&) const = default;
};

/// A bounded, typed modification to a Configuration.
struct ConfigDelta {
    std::vector<ConfigChange> changes;

    static ConfigDelta none();
    bool is_no_change() const;
    bool operator==(const ConfigDelta&) const = default;

    nlohmann::json to_json() const;  // canonical {"changes":[...]}
    std::string canonical_string() const;
};

/// What happened to each requested change: the trust-region cap, the bound
/// clamp, integer rounding, or the reason the change was dropped.
struct ApplyEvent {
    std::string field;
    std::string action;  // set | scale | set_categorical | add_method | remove_method | no_change
    double old_value = 0.0;
    double requested_value = 0.0;
    double capped_value = 0.0;   // after the trust-region cap, before clamping
    double applied_value = 0.0;
    bool trust_region_capped = false;
    bool clamped = false;
    bool dropped = false;
    std::string detail;

    nlohmann::json to_json() const;
};

struct ApplyReport {
    std::vector<ApplyEvent> events;
    bool any_dropped() const;
    bool empty() const { return events.empty(); }
    nlohmann::json to_json() const;
};

/// Applies a delta under trust-region capping and bound clamping. Total:
/// out-of-vocabulary or unknown changes degrade to no-ops with report
/// entries, and the result always validates.
std::pair<Configuration, ApplyReport> apply_delta(const Configuration& config,
                                                  const ConfigDelta& delta,
                                                  const ConfigurationSpace& space);

/// Removes architecture-dimension changes from a delta (epoch-level updates
/// must leave the architecture fixed); dropped changes are reported.
ConfigDelta strip_arch_changes(const ConfigDelta& delta, const ConfigurationSpace& space,
                               ApplyReport& dropped);

/// Deterministic, valid default configuration (the No-Tuning anchor).
Configuration default_config(const ConfigurationSpace& space, TaskType task);

/// Uniformly random valid configuration; learning_rate is log-uniform.
Configuration sample_random(const ConfigurationSpace& space, SeededRng& rng);

/// Cartesian product over per-field grids. Fields are gridded in
/// lexicographic name order; resolution 1 places the field midpoint
/// (geometric midpoint for log-scale fields). Unknown names are rejected.
std::vector<Configuration> enumerate_grid(const ConfigurationSpace& space,
                                          const std::map<std::string, int>& resolution);

}  // namespace lgt

// SPDX-License-Identifier: Apache-2.0
#include "lgt/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lgt {

using nlohmann::json;

std::string to_string(LossKind k) {
    switch (k) {
        case LossKind::cross_entropy: return "cross_entropy";
        case LossKind::focal: return "focal";
        case LossKind::mse: return "mse";
        case LossKind::mae: return "mae";
        case LossKind::huber: return "huber";
    }
    return "cross_entropy";
}

std::string to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::adam: return "adam";
        case OptimizerKind::adamw: return "adamw";
    }
    return "adam";
}

std::string to_string(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::constant: return "constant";
        case SchedulerKind::step_decay: return "step_decay";
        case SchedulerKind::cosine: return "cosine";
    }
    return "constant";
}

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

std::string to_string(AugmentMethod m) {
    switch (m) {
        case AugmentMethod::duplication: return "duplication";
        case AugmentMethod::rotation: return "rotation";
        case AugmentMethod::shift: return "shift";
        case AugmentMethod::flip: return "flip";
        case AugmentMethod::scale: return "scale";
        case AugmentMethod::noise: return "noise";
        case AugmentMethod::contrast: return "contrast";
        case AugmentMethod::none: return "none";
    }
    return "none";
}

std::optional<LossKind> loss_from_string(const std::string& s) {
    for (auto k : {LossKind::cross_entropy, LossKind::focal, LossKind::mse, LossKind::mae,
                   LossKind::huber})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<OptimizerKind> optimizer_from_string(const std::string& s) {
    for (auto k : {OptimizerKind::sgd, OptimizerKind::adam, OptimizerKind::adamw})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<SchedulerKind> scheduler_from_string(const std::string& s) {
    for (auto k : {SchedulerKind::constant, SchedulerKind::step_decay, SchedulerKind::cosine})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<Activation> activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    return std::nullopt;
}

std::optional<AugmentMethod> method_from_string(const std::string& s) {
    for (auto m : {AugmentMethod::duplication, AugmentMethod::rotation, AugmentMethod::shift,
                   AugmentMethod::flip, AugmentMethod::scale, AugmentMethod::noise,
                   AugmentMethod::contrast, AugmentMethod::none})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

bool FeatureSpec::has_method(AugmentMethod m) const {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

// ---------------------------------------------------------------------------
// Configuration JSON

json Configuration::to_json() const {
    json a;
    a["layer_widths"] = arch.layer_widths;
    a["dropout"] = arch.dropout;
    a["activation"] = to_string(arch.activation);

    json f;
    std::vector<std::string> method_names;
    for (auto m : feature.methods) method_names.push_back(to_string(m));
    f["methods"] = method_names;
    f["method_params"] = feature.method_params;

    json s;
    s["loss"] = to_string(strategy.loss);
    s["optimizer"] = to_string(strategy.optimizer);
    s["scheduler"] = to_string(strategy.scheduler);
    s["scheduler_params"] = strategy.scheduler_params;

    json h;
    h["learning_rate"] = hyper.learning_rate;
    h["weight_decay"] = hyper.weight_decay;
    h["class_weights"] = hyper.class_weights;
    h["batch_size"] = hyper.batch_size;
    h["focal_gamma"] = hyper.focal_gamma;

    return json{{"arch", a}, {"feature", f}, {"strategy", s}, {"hyper", h}};
}

Configuration Configuration::from_json(const json& j) {
    Configuration c;
    const auto& a = j.at("arch");
    c.arch.layer_widths = a.at("layer_widths").get<std::vector<int>>();
    c.arch.dropout = a.at("dropout").get<double>();
    if (auto act = activation_from_string(a.at("activation").get<std::string>())) c.arch.activation = *act;

    const auto& f = j.at("feature");
    for (const auto& name : f.at("methods")) {
        if (auto m = method_from_string(name.get<std::string>())) c.feature.methods.push_back(*m);
    }
    c.feature.method_params = f.at("method_params").get<std::map<std::string, double>>();

    const auto& s = j.at("strategy");
    if (auto v = loss_from_string(s.at("loss").get<std::string>())) c.strategy.loss = *v;
    if (auto v = optimizer_from_string(s.at("optimizer").get<std::string>())) c.strategy.optimizer = *v;
    if (auto v = scheduler_from_string(s.at("scheduler").get<std::string>())) c.strategy.scheduler = *v;
    c.strategy.scheduler_params = s.at("scheduler_params").get<std::map<std::string, double>>();

    const auto& h = j.at("hyper");
    c.hyper.learning_rate = h.at("learning_rate").get<double>();
    c.hyper.weight_decay = h.at("weight_decay").get<double>();
    c.hyper.class_weights = h.at("class_weights").get<std::vector<double>>();
    c.hyper.batch_size = h.at("batch_size").get<int>();
    c.hyper.focal_gamma = h.at("focal_gamma").get<double>();
    return c;
}

std::string Configuration::canonical_string() const { return to_json().dump(); }

// ---------------------------------------------------------------------------
// ConfigurationSpace

ConfigurationSpace ConfigurationSpace::standard(TaskType task, int n_classes, bool image_data) {
    ConfigurationSpace sp;
    sp.task = task;
    sp.n_classes = task == TaskType::classification ? n_classes : 0;
    sp.image_data = image_data;

    auto num = [&sp](std::string name, double lo, double hi, ConfigDimension dim, bool log_scale = false,
                     bool is_integer = false, double eps = 1.0) {
        sp.numeric_fields.push_back({std::move(name), lo, hi, log_scale, is_integer, eps, dim});
    };

    num("learning_rate", 1e-4, 1e-1, ConfigDimension::hyper, /*log=*/true);
    num("weight_decay", 0.0, 0.1, ConfigDimension::hyper);
    num("batch_size", 1, 256, ConfigDimension::hyper, false, /*int=*/true);
    num("focal_gamma", 0.0, 5.0, ConfigDimension::hyper);
    if (task == TaskType::classification) {
        for (int i = 0; i < n_classes; ++i)
            num("class_weight." + std::to_string(i), 0.1, 10.0, ConfigDimension::hyper, false, false,
                /*eps=*/0.5);
    }

    num("noise_sigma", 0.0, 1.0, ConfigDimension::feature);
    num("scale_jitter", 0.0, 0.5, ConfigDimension::feature);
    num("duplication_factor", 1, 4, ConfigDimension::feature, false, /*int=*/true);
    if (image_data) {
        num("rotation_degrees", 0.0, 180.0, ConfigDimension::feature);
        num("shift_fraction", 0.0, 0.5, ConfigDimension::feature);
        num("contrast_factor", 0.0, 1.0, ConfigDimension::feature);
    }

    num("step_gamma", 0.05, 1.0, ConfigDimension::strategy);
    num("step_every", 1, 10, ConfigDimension::strategy, false, /*int=*/true);
    num("min_lr", 0.0, 1e-2, ConfigDimension::strategy);

    num("dropout", 0.0, 0.9, ConfigDimension::arch);
    num("hidden_width", 32, 512, ConfigDimension::arch, false, /*int=*/true);

    if (task == TaskType::classification)
        sp.categorical_fields["loss"] = {"cross_entropy", "focal"};
    else
        sp.categorical_fields["loss"] = {"mse", "mae", "huber"};
    sp.categorical_fields["optimizer"] = {"sgd", "adam", "adamw"};
    sp.categorical_fields["scheduler"] = {"constant", "step_decay", "cosine"};
    sp.categorical_fields["activation"] = {"relu", "tanh"};

    if (image_data) {
        sp.method_vocabulary = {AugmentMethod::duplication, AugmentMethod::rotation,
                                AugmentMethod::shift,       AugmentMethod::flip,
                                AugmentMethod::scale,       AugmentMethod::noise,
                                AugmentMethod::contrast,    AugmentMethod::none};
    } else {
        sp.method_vocabulary = {AugmentMethod::duplication, AugmentMethod::scale,
                                AugmentMethod::noise, AugmentMethod::none};
    }
    return sp;
}

const NumericFieldSpec* ConfigurationSpace::find_numeric(std::string_view name) const {
    for (const auto& f : numeric_fields)
        if (f.name == name) return &f;
    return nullptr;
}

bool ConfigurationSpace::categorical_allowed(const std::string& field, const std::string& value) const {
    auto it = categorical_fields.find(field);
    if (it == categorical_fields.end()) return false;
    return std::find(it->second.begin(), it->second.end(), value) != it->second.end();
}

bool ConfigurationSpace::method_allowed(AugmentMethod m) const {
    return std::find(method_vocabulary.begin(), method_vocabulary.end(), m) !=
           method_vocabulary.end();
}

ConfigDimension ConfigurationSpace::categorical_dimension(const std::string& field) const {
    if (field == "activation") return ConfigDimension::arch;
    return ConfigDimension::strategy;
}

// Renders a bound so that exact powers of ten print as "1e-4" style tokens.
static std::string format_bound(double v) {
    if (v != 0.0) {
        const double lg = std::log10(std::abs(v));
        const double rounded = std::round(lg);
        if (std::abs(lg - rounded) < 1e-12 && std::abs(rounded) >= 1.0 &&
            std::abs(v) == std::pow(10.0, rounded)) {
            std::ostringstream os;
            os << (v < 0 ? "-1e" : "1e") << static_cast<long long>(rounded);
            return os.str();
        }
    }
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string ConfigurationSpace::summary_text() const {
    std::ostringstream os;
    os << "task: " << lgt::to_string(task);
    if (task == TaskType::classification) os << " (" << n_classes << " classes)";
    os << "\n";
    os << "layers: " << min_layers << "-" << max_layers << " hidden layers, widths " << min_width
       << "-" << max_width << "\n";
    for (const auto& f : numeric_fields) {
        os << f.name << ": [" << format_bound(f.lo) << ", " << format_bound(f.hi) << "]";
        if (f.log_scale) os << " (log scale)";
        if (f.is_integer) os << " (integer)";
        os << ", max relative change per epoch " << f.trust_region << "\n";
    }
    for (const auto& [name, values] : categorical_fields) {
        os << name << ": {";
        for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << values[i];
        os << "}\n";
    }
    os << "augmentation methods: {";
    for (std::size_t i = 0; i < method_vocabulary.size(); ++i)
        os << (i ? ", " : "") << lgt::to_string(method_vocabulary[i]);
    os << "}\n";
    return os.str();
}

json ConfigurationSpace::to_json() const {
    json fields = json::array();
    for (const auto& f : numeric_fields) {
        fields.push_back({{"name", f.name},
                          {"lo", f.lo},
                          {"hi", f.hi},
                          {"log_scale", f.log_scale},
                          {"integer", f.is_integer},
                          {"trust_region", f.trust_region},
                          {"dimension", static_cast<int>(f.dim)}});
    }
    std::vector<std::string> methods;
    for (auto m : method_vocabulary) methods.push_back(lgt::to_string(m));
    return json{{"task", lgt::to_string(task)},
                {"n_classes", n_classes},
                {"image_data", image_data},
                {"min_layers", min_layers},
                {"max_layers", max_layers},
                {"min_width", min_width},
                {"max_width", max_width},
                {"numeric_fields", fields},
                {"categorical_fields", categorical_fields},
                {"method_vocabulary", methods}};
}

ConfigurationSpace ConfigurationSpace::from_json(const json& j) {
    ConfigurationSpace sp;
    sp.task = task_from_string(j.at("task").get<std::string>());
    sp.n_classes = j.at("n_classes").get<int>();
    sp.image_data = j.at("image_data").get<bool>();
    sp.min_layers = j.at("min_layers").get<int>();
    sp.max_layers = j.at("max_layers").get<int>();
    sp.min_width = j.at("min_width").get<int>();
    sp.max_width = j.at("max_width").get<int>();
    for (const auto& f : j.at("numeric_fields")) {
        sp.numeric_fields.push_back({f.at("name").get<std::string>(), f.at("lo").get<double>(),
                                     f.at("hi").get<double>(), f.at("log_scale").get<bool>(),
                                     f.at("integer").get<bool>(), f.at("trust_region").get<double>(),
                                     static_cast<ConfigDimension>(f.at("dimension").get<int>())});
    }
    sp.categorical_fields =
        j.at("categorical_fields").get<std::map<std::string, std::vector<std::string>>>();
    for (const auto& name : j.at("method_vocabulary"))
        if (auto m = method_from_string(name.get<std::string>())) sp.method_vocabulary.push_back(*m);
    return sp;
}

// ---------------------------------------------------------------------------
// Flat field access

double default_method_param(const std::string& name) {
    if (name == "noise_sigma") return 0.1;
    if (name == "scale_jitter") return 0.1;
    if (name == "duplication_factor") return 1.0;
    if (name == "rotation_degrees") return 15.0;
    if (name == "shift_fraction") return 0.1;
    if (name == "contrast_factor") return 0.2;
    if (name == "step_gamma") return 0.5;
    if (name == "step_every") return 3.0;
    if (name == "min_lr") return 0.0;
    return 0.0;
}

static bool parse_class_weight_index(const std::string& name, int& idx) {
    constexpr std::string_view prefix = "class_weight.";
    if (name.rfind(prefix, 0) != 0) return false;
    try {
        idx = std::stoi(name.substr(prefix.size()));
    } catch (...) {
        return false;
    }
    return idx >= 0;
}

static bool is_feature_param(const std::string& name) {
    return name == "noise_sigma" || name == "scale_jitter" || name == "duplication_factor" ||
           name == "rotation_degrees" || name == "shift_fraction" || name == "contrast_factor";
}

static bool is_scheduler_param(const std::string& name) {
    return name == "step_gamma" || name == "step_every" || name == "min_lr";
}

std::optional<double> get_numeric_field(const Configuration& c, const std::string& name) {
    if (name == "learning_rate") return c.hyper.learning_rate;
    if (name == "weight_decay") return c.hyper.weight_decay;
    if (name == "batch_size") return static_cast<double>(c.hyper.batch_size);
    if (name == "focal_gamma") return c.hyper.focal_gamma;
    if (name == "dropout") return c.arch.dropout;
    if (name == "hidden_width")
        return c.arch.layer_widths.empty() ? 0.0 : static_cast<double>(c.arch.layer_widths.front());
    int idx = 0;
    if (parse_class_weight_index(name, idx)) {
        if (idx >= static_cast<int>(c.hyper.class_weights.size())) return std::nullopt;
        return c.hyper.class_weights[static_cast<std::size_t>(idx)];
    }
    if (is_feature_param(name)) {
        auto it = c.feature.method_params.find(name);
        return it != c.feature.method_params.end() ? it->second : default_method_param(name);
    }
    if (is_scheduler_param(name)) {
        auto it = c.strategy.scheduler_params.find(name);
        return it != c.strategy.scheduler_params.end() ? it->second : default_method_param(name);
    }
    return std::nullopt;
}

bool set_numeric_field(Configuration& c, const std::string& name, double value) {
    if (name == "learning_rate") {
        c.hyper.learning_rate = value;
        return true;
    }
    if (name == "weight_decay") {
        c.hyper.weight_decay = value;
        return true;
    }
    if (name == "batch_size") {
        c.hyper.batch_size = static_cast<int>(value);
        return true;
    }
    if (name == "focal_gamma") {
        c.hyper.focal_gamma = value;
        return true;
    }
    if (name == "dropout") {
        c.arch.dropout = value;
        return true;
    }
    if (name == "hidden_width") {
        for (auto& w : c.arch.layer_widths) w = static_cast<int>(value);
        return true;
    }
    int idx = 0;
    if (parse_class_weight_index(name, idx)) {
        if (idx >= static_cast<int>(c.hyper.class_weights.size())) return false;
        c.hyper.class_weights[static_cast<std::size_t>(idx)] = value;
        return true;
    }
    if (is_feature_param(name)) {
        c.feature.method_params[name] = value;
        return true;
    }
    if (is_scheduler_param(name)) {
        c.strategy.scheduler_params[name] = value;
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// validate

static void add_violation(ValidationResult& r, std::string field, std::string value,
                          std::string bound, std::string message) {
    r.violations.push_back({std::move(field), std::move(value), std::move(bound), std::move(message)});
}

static std::string num_str(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

ValidationResult validate(const Configuration& c, const ConfigurationSpace& space) {
    ValidationResult r;

    const int n_layers = static_cast<int>(c.arch.layer_widths.size());
    if (n_layers < space.min_layers || n_layers > space.max_layers) {
        add_violation(r, "arch.layer_count", std::to_string(n_layers),
                      std::to_string(space.min_layers) + ".." + std::to_string(space.max_layers),
                      "hidden layer count " + std::to_string(n_layers) + " outside [" +
                          std::to_string(space.min_layers) + ", " + std::to_string(space.max_layers) + "]");
    }
    for (std::size_t i = 0; i < c.arch.layer_widths.size(); ++i) {
        const int w = c.arch.layer_widths[i];
        if (w < space.min_width || w > space.max_width) {
            add_violation(r, "arch.layer_widths[" + std::to_string(i) + "]", std::to_string(w),
                          std::to_string(space.min_width) + ".." + std::to_string(space.max_width),
                          "layer width " + std::to_string(w) + " outside [" +
                              std::to_string(space.min_width) + ", " + std::to_string(space.max_width) +
                              "]");
        }
    }

    auto check_numeric = [&](const std::string& name, double v) {
        const NumericFieldSpec* f = space.find_numeric(name);
        if (f == nullptr) return;
        if (!(v >= f->lo && v <= f->hi) || !std::isfinite(v)) {
            add_violation(r, name, num_str(v), "[" + num_str(f->lo) + ", " + num_str(f->hi) + "]",
                          name + " = " + num_str(v) + " outside [" + num_str(f->lo) + ", " +
                              num_str(f->hi) + "]");
        }
    };

    check_numeric("dropout", c.arch.dropout);
    check_numeric("learning_rate", c.hyper.learning_rate);
    check_numeric("weight_decay", c.hyper.weight_decay);
    check_numeric("batch_size", static_cast<double>(c.hyper.batch_size));
    check_numeric("focal_gamma", c.hyper.focal_gamma);
    if (c.hyper.batch_size < 1)
        add_violation(r, "batch_size", std::to_string(c.hyper.batch_size), ">= 1",
                      "batch_size must be at least 1");

    if (space.task == TaskType::classification) {
        if (static_cast<int>(c.hyper.class_weights.size()) != space.n_classes) {
            add_violation(r, "class_weights", std::to_string(c.hyper.class_weights.size()),
                          std::to_string(space.n_classes),
                          "class_weights length must equal the class count");
        }
        for (std::size_t i = 0; i < c.hyper.class_weights.size(); ++i)
            check_numeric("class_weight." + std::to_string(i), c.hyper.class_weights[i]);
    }

    // methods: vocabulary membership and no duplicates
    for (std::size_t i = 0; i < c.feature.methods.size(); ++i) {
        const auto m = c.feature.methods[i];
        if (!space.method_allowed(m)) {
            add_violation(r, "feature.methods", to_string(m), "space vocabulary",
                          "augmentation method '" + to_string(m) + "' not allowed for this space");
        }
        for (std::size_t j = i + 1; j < c.feature.methods.size(); ++j)
            if (c.feature.methods[j] == m)
                add_violation(r, "feature.methods", to_string(m), "no duplicates",
                              "duplicate augmentation method '" + to_string(m) + "'");
    }
    for (const auto& [name, v] : c.feature.method_params) {
        if (space.find_numeric(name) == nullptr) {
            add_violation(r, "feature.method_params." + name, num_str(v), "known parameter",
                          "unknown method parameter '" + name + "'");
        } else {
            check_numeric(name, v);
        }
    }

    if (!space.categorical_allowed("loss", to_string(c.strategy.loss)))
        add_violation(r, "loss", to_string(c.strategy.loss), "task-compatible losses",
                      "loss '" + to_string(c.strategy.loss) + "' incompatible with " +
                          to_string(space.task) + " task");
    if (!space.categorical_allowed("optimizer", to_string(c.strategy.optimizer)))
        add_violation(r, "optimizer", to_string(c.strategy.optimizer), "allowed optimizers",
                      "optimizer not in vocabulary");
    if (!space.categorical_allowed("scheduler", to_string(c.strategy.scheduler)))
        add_violation(r, "scheduler", to_string(c.strategy.scheduler), "allowed schedulers",
                      "scheduler not in vocabulary");
    if (!space.categorical_allowed("activation", to_string(c.arch.activation)))
        add_violation(r, "activation", to_string(c.arch.activation), "allowed activations",
                      "activation not in vocabulary");
    for (const auto& [name, v] : c.strategy.scheduler_params) {
        if (space.find_numeric(name) == nullptr) {
            add_violation(r, "strategy.scheduler_params." + name, num_str(v), "known parameter",
                          "unknown scheduler parameter '" + name + "'");
        } else {
            check_numeric(name, v);
        }
    }

    return r;
}

// ---------------------------------------------------------------------------
// ConfigDelta

ConfigDelta ConfigDelta::none() {
    ConfigDelta d;
    d.changes.push_back({ConfigChange::Kind::no_change, "", 0.0, ""});
    return d;
}

bool ConfigDelta::is_no_change() const {
    for (const auto& ch : changes)
        if (ch.kind != ConfigChange::Kind::no_change) return false;
    return true;
}

json ConfigDelta::to_json() const {
    json arr = json::array();
    for (const auto& ch : changes) {
        switch (ch.kind) {
            case ConfigChange::Kind::set_numeric:
                arr.push_back({{"set_numeric", {{"field", ch.field}, {"value", ch.value}}}});
                break;
            case ConfigChange::Kind::scale_numeric:
                arr.push_back({{"scale_numeric", {{"field", ch.field}, {"factor", ch.value}}}});
                break;
            case ConfigChange::Kind::set_categorical:
                arr.push_back({{"set_categorical", {{"field", ch.field}, {"value", ch.str_value}}}});
                break;
            case ConfigChange::Kind::add_method:
                arr.push_back({{"add_method", ch.str_value}});
                break;
            case ConfigChange::Kind::remove_method:
                arr.push_back({{"remove_method", ch.str_value}});
                break;
            case ConfigChange::Kind::no_change:
                arr.push_back({{"no_change", true}});
                break;
        }
    }
    return json{{"changes", arr}};
}

std::string ConfigDelta::canonical_string() const { return to_json().dump(); }

json ApplyEvent::to_json() const {
    return json{{"field", field},
                {"action", action},
                {"old_value", old_value},
                {"requested_value", requested_value},
                {"capped_value", capped_value},
                {"applied_value", applied_value},
                {"trust_region_capped", trust_region_capped},
                {"clamped", clamped},
                {"dropped", dropped},
                {"detail", detail}};
}

bool ApplyReport::any_dropped() const {
    for (const auto& e : events)
        if (e.dropped) return true;
    return false;
}

json ApplyReport::to_json() const {
    json arr = json::array();
    for (const auto& e : events) arr.push_back(e.to_json());
    return arr;
}

// ---------------------------------------------------------------------------
// apply_delta

static void apply_numeric_change(Configuration& c, const ConfigChange& ch,
                                 const ConfigurationSpace& space, ApplyReport& report) {
    ApplyEvent ev;
    ev.field = ch.field;
    ev.action = ch.kind == ConfigChange::Kind::set_numeric ? "set" : "scale";
    ev.requested_value = ch.value;

    const NumericFieldSpec* f = space.find_numeric(ch.field);
    if (f == nullptr) {
        ev.dropped = true;
        ev.detail = "unknown numeric field '" + ch.field + "'";
        report.events.push_back(ev);
        return;
    }
    auto old = get_numeric_field(c, ch.field);
    if (!old) {
        ev.dropped = true;
        ev.detail = "field '" + ch.field + "' not addressable in this configuration";
        report.events.push_back(ev);
        return;
    }
    ev.old_value = *old;

    double target =
        ch.kind == ConfigChange::Kind::set_numeric ? ch.value : *old * ch.value;
    if (!std::isfinite(target)) {
        ev.dropped = true;
        ev.detail = "non-finite target value";
        report.events.push_back(ev);
        return;
    }
    ev.requested_value = target;

    // Trust-region cap: relative change limited by epsilon with a width-based
    // floor on the denominator so zero-valued fields stay movable.
    const double denom = std::max(std::abs(*old), (f->hi - f->lo) * 1e-6);
    const double max_step = f->trust_region * denom;
    double capped = target;
    if (std::abs(target - *old) > max_step) {
        capped = *old + std::copysign(max_step, target - *old);
        ev.trust_region_capped = true;
    }
    ev.capped_value = capped;

    double applied = std::clamp(capped, f->lo, f->hi);
    if (applied != capped) ev.clamped = true;

    if (f->is_integer) {
        // Round toward the old value so rounding never exceeds the cap.
        applied = target > *old ? std::floor(applied) : std::ceil(applied);
        applied = std::clamp(applied, f->lo, f->hi);
    }
    ev.applied_value = applied;

    set_numeric_field(c, ch.field, applied);
    report.events.push_back(ev);
}

static void apply_categorical_change(Configuration& c, const ConfigChange& ch,
                                     const ConfigurationSpace& space, ApplyReport& report) {
    ApplyEvent ev;
    ev.field = ch.field;
    ev.action = "set_categorical";
    if (space.categorical_fields.find(ch.field) == space.categorical_fields.end()) {
        ev.dropped = true;
        ev.detail = "unknown categorical field '" + ch.field + "'";
        report.events.push_back(ev);
        return;
    }
    if (!space.categorical_allowed(ch.field, ch.str_value)) {
        ev.dropped = true;
        ev.detail = "value '" + ch.str_value + "' not in vocabulary for '" + ch.field + "'";
        report.events.push_back(ev);
        return;
    }
    std::string old_value;
    if (ch.field == "loss") {
        old_value = to_string(c.strategy.loss);
        c.strategy.loss = *loss_from_string(ch.str_value);
    } else if (ch.field == "optimizer") {
        old_value = to_string(c.strategy.optimizer);
        c.strategy.optimizer = *optimizer_from_string(ch.str_value);
    } else if (ch.field == "scheduler") {
        old_value = to_string(c.strategy.scheduler);
        c.strategy.scheduler = *scheduler_from_string(ch.str_value);
    } else if (ch.field == "activation") {
        old_value = to_string(c.arch.activation);
        c.arch.activation = *activation_from_string(ch.str_value);
    }
    ev.detail = old_value + " -> " + ch.str_value;
    report.events.push_back(ev);
}

std::pair<Configuration, ApplyReport> apply_delta(const Configuration& config,
                                                  const ConfigDelta& delta,
                                                  const ConfigurationSpace& space) {
    Configuration out = config;
    ApplyReport report;

    for (const auto& ch : delta.changes) {
        switch (ch.kind) {
            case ConfigChange::Kind::no_change:
                break;
            case ConfigChange::Kind::set_numeric:
            case ConfigChange::Kind::scale_numeric:
                apply_numeric_change(out, ch, space, report);
                break;
            case ConfigChange::Kind::set_categorical:
                apply_categorical_change(out, ch, space, report);
                break;
            case ConfigChange::Kind::add_method: {
                ApplyEvent ev;
                ev.field = "feature.methods";
                ev.action = "add_method";
                auto m = method_from_string(ch.str_value);
                if (!m || !space.method_allowed(*m)) {
                    ev.dropped = true;
                    ev.detail = "method '" + ch.str_value + "' not in vocabulary";
                } else if (out.feature.has_method(*m)) {
                    ev.detail = "method '" + ch.str_value + "' already present";
                } else {
                    out.feature.methods.push_back(*m);
                    ev.detail = "added '" + ch.str_value + "'";
                }
                report.events.push_back(ev);
                break;
            }
            case ConfigChange::Kind::remove_method: {
                ApplyEvent ev;
                ev.field = "feature.methods";
                ev.action = "remove_method";
                auto m = method_from_string(ch.str_value);
                if (!m) {
                    ev.dropped = true;
                    ev.detail = "unknown method '" + ch.str_value + "'";
                } else {
                    auto it = std::find(out.feature.methods.begin(), out.feature.methods.end(), *m);
                    if (it == out.feature.methods.end()) {
                        ev.detail = "method '" + ch.str_value + "' not present";
                    } else {
                        out.feature.methods.erase(it);
                        ev.detail = "removed '" + ch.str_value + "'";
                    }
                }
                report.events.push_back(ev);
                break;
            }
        }
    }

    // The clamp/vocabulary guards above keep the result valid; if something
    // slipped through, degrade to the input configuration rather than emit an
    // invalid one.
    if (!validate(out, space).ok()) {
        ApplyEvent ev;
        ev.field = "*";
        ev.action = "revert";
        ev.dropped = true;
        ev.detail = "applied delta produced an invalid configuration; reverted";
        report.events.push_back(ev);
        return {config, report};
    }
    return {out, report};
}

ConfigDelta strip_arch_changes(const ConfigDelta& delta, const ConfigurationSpace& space,
                               ApplyReport& dropped) {
    ConfigDelta out;
    for (const auto& ch : delta.changes) {
        bool is_arch = false;
        if (ch.kind == ConfigChange::Kind::set_numeric || ch.kind == ConfigChange::Kind::scale_numeric) {
            const NumericFieldSpec* f = space.find_numeric(ch.field);
            is_arch = f != nullptr && f->dim == ConfigDimension::arch;
        } else if (ch.kind == ConfigChange::Kind::set_categorical) {
            is_arch = space.categorical_dimension(ch.field) == ConfigDimension::arch;
        }
        if (is_arch) {
            ApplyEvent ev;
            ev.field = ch.field;
            ev.action = "strip_arch";
            ev.dropped = true;
            ev.detail = "architecture fields are fixed within an iteration";
            dropped.events.push_back(ev);
        } else {
            out.changes.push_back(ch);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// default / random / grid

Configuration default_config(const ConfigurationSpace& space, TaskType task) {
    Configuration c;
    c.arch.layer_widths = {64, 64};
    c.arch.dropout = 0.2;
    c.arch.activation = Activation::relu;
    c.feature.methods.clear();
    c.feature.method_params.clear();
    c.strategy.loss = task == TaskType::classification ? LossKind::cross_entropy : LossKind::mse;
    c.strategy.optimizer = OptimizerKind::adam;
    c.strategy.scheduler = SchedulerKind::constant;
    c.strategy.scheduler_params.clear();
    c.hyper.learning_rate = 0.01;
    c.hyper.weight_decay = 0.0;
    c.hyper.batch_size = 32;
    c.hyper.focal_gamma = 2.0;
    c.hyper.class_weights.assign(
        task == TaskType::classification ? static_cast<std::size_t>(space.n_classes) : 0, 1.0);
    return c;
}

Configuration sample_random(const ConfigurationSpace& space, SeededRng& rng) {
    Configuration c = default_config(space, space.task);

    const int n_layers = rng.uniform_int(space.min_layers, space.max_layers);
    c.arch.layer_widths.clear();
    for (int i = 0; i < n_layers; ++i)
        c.arch.layer_widths.push_back(rng.uniform_int(space.min_width, space.max_width));
    c.arch.dropout = rng.uniform(0.0, 0.9);
    c.arch.activation = rng.uniform_int(0, 1) == 0 ? Activation::relu : Activation::tanh;

    std::vector<AugmentMethod> pool;
    for (auto m : space.method_vocabulary)
        if (m != AugmentMethod::none) pool.push_back(m);
    rng.shuffle(pool);
    const int n_methods = rng.uniform_int(0, std::min<int>(2, static_cast<int>(pool.size())));
    c.feature.methods.assign(pool.begin(), pool.begin() + n_methods);
    for (auto m : c.feature.methods) {
        // sample this method's parameter if it has one
        static const std::map<AugmentMethod, std::string> param_of = {
            {AugmentMethod::noise, "noise_sigma"},
            {AugmentMethod::scale, "scale_jitter"},
            {AugmentMethod::duplication, "duplication_factor"},
            {AugmentMethod::rotation, "rotation_degrees"},
            {AugmentMethod::shift, "shift_fraction"},
            {AugmentMethod::contrast, "contrast_factor"},
        };
        auto it = param_of.find(m);
        if (it == param_of.end()) continue;
        const NumericFieldSpec* f = space.find_numeric(it->second);
        if (f == nullptr) continue;
        double v = f->is_integer ? static_cast<double>(rng.uniform_int(static_cast<int>(f->lo),
                                                                       static_cast<int>(f->hi)))
                                 : rng.uniform(f->lo, f->hi);
        c.feature.method_params[it->second] = v;
    }

    const auto& losses = space.categorical_fields.at("loss");
    c.strategy.loss = *loss_from_string(losses[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(losses.size()) - 1))]);
    const auto& opts = space.categorical_fields.at("optimizer");
    c.strategy.optimizer = *optimizer_from_string(opts[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(opts.size()) - 1))]);
    const auto& scheds = space.categorical_fields.at("scheduler");
    c.strategy.scheduler = *scheduler_from_string(scheds[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(scheds.size()) - 1))]);
    c.strategy.scheduler_params["step_gamma"] = rng.uniform(0.05, 1.0);
    c.strategy.scheduler_params["step_every"] = rng.uniform_int(1, 10);
    c.strategy.scheduler_params["min_lr"] = rng.uniform(0.0, 1e-2);

    const NumericFieldSpec* lr = space.find_numeric("learning_rate");
    c.hyper.learning_rate = rng.log_uniform(lr->lo, lr->hi);
    const NumericFieldSpec* wd = space.find_numeric("weight_decay");
    c.hyper.weight_decay = rng.uniform(wd->lo, wd->hi);
    const NumericFieldSpec* bs = space.find_numeric("batch_size");
    c.hyper.batch_size = rng.uniform_int(static_cast<int>(bs->lo), static_cast<int>(bs->hi));
    const NumericFieldSpec* fg = space.find_numeric("focal_gamma");
    c.hyper.focal_gamma = rng.uniform(fg->lo, fg->hi);
    for (auto& w : c.hyper.class_weights) w = rng.uniform(0.1, 10.0);

    return c;
}

std::vector<Configuration> enumerate_grid(const ConfigurationSpace& space,
                                          const std::map<std::string, int>& resolution) {
    std::vector<std::pair<std::string, std::vector<double>>> grids;  // sorted by map order
    for (const auto& [name, res] : resolution) {
        if (res < 1) throw std::invalid_argument("grid resolution must be >= 1 for '" + name + "'");
        const NumericFieldSpec* f = space.find_numeric(name);
        if (f == nullptr) throw std::invalid_argument("unknown grid field '" + name + "'");
        std::vector<double> values;
        if (res == 1) {
            double mid = f->log_scale ? std::exp(0.5 * (std::log(f->lo) + std::log(f->hi)))
                                      : 0.5 * (f->lo + f->hi);
            if (f->is_integer) mid = static_cast<double>(std::llround(mid));
            values.push_back(mid);
        } else {
            for (int i = 0; i < res; ++i) {
                const double t = static_cast<double>(i) / (res - 1);
                // endpoints land exactly on the bounds; exp(log(...)) can
                // otherwise stray past them by an ulp
                double v = i == 0         ? f->lo
                           : i == res - 1 ? f->hi
                           : f->log_scale
                               ? std::exp(std::log(f->lo) + t * (std::log(f->hi) - std::log(f->lo)))
                               : f->lo + t * (f->hi - f->lo);
                v = std::clamp(v, f->lo, f->hi);
                if (f->is_integer) v = static_cast<double>(std::llround(v));
                values.push_back(v);
            }
        }
        grids.emplace_back(name, std::move(values));
    }

    std::vector<Configuration> out;
    Configuration base = default_config(space, space.task);
    std::vector<std::size_t> idx(grids.size(), 0);
    while (true) {
        Configuration c = base;
        for (std::size_t gi = 0; gi < grids.size(); ++gi)
            set_numeric_field(c, grids[gi].first, grids[gi].second[idx[gi]]);
        out.push_back(std::move(c));
        // odometer increment, last field fastest
        std::size_t gi = grids.size();
        while (gi > 0) {
            --gi;
            if (++idx[gi] < grids[gi].second.size()) break;
            idx[gi] = 0;
            if (gi == 0) return out;
        }
        if (grids.empty()) return out;
    }
}

}  // namespace lgt

// SPDX-License-Identifier: Apache-2.0
#include "lgt/agents.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "lgt/dataset.hpp"

namespace lgt {

using nlohmann::json;

// ---------------------------------------------------------------------------
// state serialization

json PromptState::to_json() const {
    return json{{"base_hash", hash_hex(fnv1a(base_text))}, {"notes", guidance_notes}};
}

static json arch_to_json(const ArchSpec& a) {
    return json{{"layer_widths", a.layer_widths},
                {"dropout", a.dropout},
                {"activation", to_string(a.activation)}};
}

json AdvisorState::to_json() const {
    json recent = json::array();
    for (const auto& m : recent_metrics) recent.push_back(m.to_json());
    return json{{"current_metrics", current_metrics.to_json()},
                {"recent_metrics", recent},
                {"current_config", current_config.to_json()},
                {"space_summary", space_summary}};
}

json EvaluatorState::to_json() const {
    return json{{"current_metrics", current_metrics.to_json()},
                {"current_config", current_config.to_json()},
                {"baseline_metrics", baseline_metrics.to_json()},
                {"baseline_config", baseline_config.to_json()}};
}

json OptimizerAgentState::to_json() const {
    json hist = json::array();
    for (const auto& e : digest)
        hist.push_back(json{{"epoch", e.epoch},
                            {"val_loss", e.val_loss},
                            {"primary_metric", e.primary_metric},
                            {"success", e.success},
                            {"delta", e.delta_summary}});
    return json{{"history", hist}, {"current_metrics", current_metrics.to_json()}};
}

json ArchitectState::to_json() const {
    json iters = json::array();
    for (const auto& it : iterations)
        iters.push_back(json{{"index", it.index},
                             {"arch", arch_to_json(it.arch)},
                             {"first_train_loss", it.first_train_loss},
                             {"final_train_loss", it.final_train_loss},
                             {"final_val_loss", it.final_val_loss},
                             {"mean_overfit_gap", it.mean_overfit_gap},
                             {"final_primary", it.final_primary}});
    return json{{"task", lgt::to_string(task)},
                {"current_arch", arch_to_json(current_arch)},
                {"iterations", iters}};
}

json PromptDeltaResponse::to_json() const {
    json arr = json::array();
    for (const auto& op : ops) {
        if (op.kind == NoteOp::Kind::append)
            arr.push_back(json{{"append", op.note}});
        else
            arr.push_back(json{{"replace", {{"index", op.index}, {"note", op.note}}}});
    }
    return json{{"note_ops", arr}};
}

// ---------------------------------------------------------------------------
// operations

AdvisorState build_advisor_state(const std::vector<EpochMetrics>& history,
                                 const Configuration& config, const ConfigurationSpace& space) {
    if (history.empty())
        throw std::invalid_argument("build_advisor_state: needs at least one epoch of metrics");
    AdvisorState s;
    s.current_metrics = history.back();
    const std::size_t w = static_cast<std::size_t>(prompts::kMetricWindow);
    const std::size_t start = history.size() > w ? history.size() - w : 0;
    s.recent_metrics.assign(history.begin() + static_cast<std::ptrdiff_t>(start), history.end());
    s.current_config = config;
    s.space_summary = space.summary_text();
    return s;
}

static std::string render_user_part(const PromptState& prompt, const json& state_json) {
    std::string s;
    if (!prompt.guidance_notes.empty()) {
        s += "\n## Guidance notes\n";
        for (const auto& note : prompt.guidance_notes) {
            s += "- ";
            s += note;
            s += "\n";
        }
    }
    s += "\n## State\n```json\n";
    s += state_json.dump(2);
    s += "\n```\n";
    return s;
}

RenderedPrompt render_prompt_parts(const PromptState& prompt, const json& state_json,
                                   int char_budget) {
    RenderedPrompt out;
    out.system_text = prompt.base_text;
    json state = state_json;
    out.user_text = render_user_part(prompt, state);
    const char* elidable[] = {"recent_metrics", "history", "iterations"};
    while (static_cast<int>(out.system_text.size() + out.user_text.size()) > char_budget) {
        bool elided = false;
        for (const char* key : elidable) {
            if (state.is_object() && state.contains(key) && state[key].is_array() &&
                state[key].size() > 1) {
                state[key].erase(0);  // oldest first
                elided = true;
                break;
            }
        }
        if (!elided) {
            const std::size_t keep = char_budget > static_cast<int>(out.system_text.size())
                                         ? static_cast<std::size_t>(char_budget) - out.system_text.size()
                                         : 0;
            out.user_text.resize(keep);
            return out;
        }
        out.user_text = render_user_part(prompt, state);
    }
    return out;
}

std::string render_prompt(const PromptState& prompt, const json& state_json, int char_budget) {
    return render_prompt_parts(prompt, state_json, char_budget).full();
}

// ---------------------------------------------------------------------------
// JSON extraction from untrusted text

// Balanced-brace candidates in discovery order (outer objects before the
// objects nested inside them). Parse failures are skipped.
static std::vector<json> extract_json_objects(const std::string& text) {
    std::vector<json> out;
    constexpr std::size_t kMaxScan = 1 << 16;
    constexpr std::size_t kMaxObjects = 32;
    const std::size_t n = std::min(text.size(), kMaxScan);

    for (std::size_t start = 0; start < n && out.size() < kMaxObjects; ++start) {
        if (text[start] != '{') continue;
        int depth = 0;
        bool in_string = false;
        bool escape = false;
        for (std::size_t i = start; i < n; ++i) {
            const char c = text[i];
            if (escape) {
                escape = false;
                continue;
            }
            if (c == '\\') {
                escape = in_string;
                continue;
            }
            if (c == '"') {
                in_string = !in_string;
                continue;
            }
            if (in_string) continue;
            if (c == '{') ++depth;
            if (c == '}') {
                --depth;
                if (depth == 0) {
                    json candidate = json::parse(text.substr(start, i - start + 1), nullptr,
                                                 /*allow_exceptions=*/false);
                    if (!candidate.is_discarded() && candidate.is_object())
                        out.push_back(std::move(candidate));
                    break;
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// advisor parsing

static const char* kChangeKeys[] = {"set_numeric", "scale_numeric", "set_categorical",
                                    "add_method",  "remove_method", "no_change"};

static bool is_change_object(const json& j) {
    for (const char* key : kChangeKeys)
        if (j.contains(key)) return true;
    return false;
}

static std::optional<ConfigChange> parse_change(const json& j, const ConfigurationSpace& space,
                                                std::vector<std::string>& warnings) {
    if (!j.is_object()) {
        warnings.push_back("change entry is not an object");
        return std::nullopt;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : kChangeKeys) known |= it.key() == key;
        if (!known) warnings.push_back("ignored unknown key '" + it.key() + "' in change entry");
    }

    if (j.contains("no_change")) return ConfigChange{ConfigChange::Kind::no_change, "", 0.0, ""};

    auto numeric_change = [&](const char* key, ConfigChange::Kind kind,
                              const char* value_key) -> std::optional<ConfigChange> {
        const json& body = j.at(key);
        if (!body.is_object() || !body.contains("field") || !body.at("field").is_string() ||
            !body.contains(value_key) || !body.at(value_key).is_number()) {
            warnings.push_back(std::string("malformed ") + key + " entry dropped");
            return std::nullopt;
        }
        const std::string field = body.at("field").get<std::string>();
        if (space.find_numeric(field) == nullptr) {
            warnings.push_back("unknown numeric field '" + field + "' dropped");
            return std::nullopt;
        }
        return ConfigChange{kind, field, body.at(value_key).get<double>(), ""};
    };

    if (j.contains("set_numeric")) return numeric_change("set_numeric", ConfigChange::Kind::set_numeric, "value");
    if (j.contains("scale_numeric"))
        return numeric_change("scale_numeric", ConfigChange::Kind::scale_numeric, "factor");

    if (j.contains("set_categorical")) {
        const json& body = j.at("set_categorical");
        if (!body.is_object() || !body.contains("field") || !body.at("field").is_string() ||
            !body.contains("value") || !body.at("value").is_string()) {
            warnings.push_back("malformed set_categorical entry dropped");
            return std::nullopt;
        }
        const std::string field = body.at("field").get<std::string>();
        const std::string value = body.at("value").get<std::string>();
        if (!space.categorical_allowed(field, value)) {
            warnings.push_back("categorical '" + field + "'='" + value +
                               "' not in vocabulary; dropped");
            return std::nullopt;
        }
        return ConfigChange{ConfigChange::Kind::set_categorical, field, 0.0, value};
    }

    auto method_change = [&](const char* key, ConfigChange::Kind kind) -> std::optional<ConfigChange> {
        const json& body = j.at(key);
        if (!body.is_string()) {
            warnings.push_back(std::string("malformed ") + key + " entry dropped");
            return std::nullopt;
        }
        const std::string name = body.get<std::string>();
        auto m = method_from_string(name);
        if (!m || !space.method_allowed(*m)) {
            warnings.push_back("augmentation method '" + name + "' not in vocabulary; dropped");
            return std::nullopt;
        }
        return ConfigChange{kind, "", 0.0, name};
    };
    if (j.contains("add_method")) return method_change("add_method", ConfigChange::Kind::add_method);
    if (j.contains("remove_method"))
        return method_change("remove_method", ConfigChange::Kind::remove_method);

    return std::nullopt;
}

ConfigDeltaResponse parse_advisor_response(const std::string& text, const ConfigurationSpace& space) {
    ConfigDeltaResponse resp;
    for (const json& obj : extract_json_objects(text)) {
        const bool has_changes_array = obj.contains("changes") && obj.at("changes").is_array();
        const bool is_bare_change = is_change_object(obj);
        if (!has_changes_array && !is_bare_change) continue;

        if (obj.contains("rationale") && obj.at("rationale").is_string())
            resp.rationale = obj.at("rationale").get<std::string>();

        if (has_changes_array) {
            for (const json& entry : obj.at("changes")) {
                if (auto ch = parse_change(entry, space, resp.warnings))
                    resp.delta.changes.push_back(std::move(*ch));
            }
        } else {
            if (auto ch = parse_change(obj, space, resp.warnings))
                resp.delta.changes.push_back(std::move(*ch));
        }
        if (resp.delta.changes.empty())
            resp.delta = ConfigDelta::none();  // everything dropped; explicit no-op
        return resp;
    }
    resp.delta = ConfigDelta::none();
    resp.rationale = "parse-failure";
    resp.parse_failed = true;
    return resp;
}

EvalResponse parse_evaluator_response(const std::string& text) {
    EvalResponse resp;
    for (const json& obj : extract_json_objects(text)) {
        if (!obj.contains("success") || !obj.at("success").is_boolean()) continue;
        resp.success = obj.at("success").get<bool>();
        for (const char* key : {"reason", "rationale"})
            if (obj.contains(key) && obj.at(key).is_string())
                resp.rationale = obj.at(key).get<std::string>();
        return resp;
    }
    resp.success = false;
    resp.rationale = "parse-failure";
    resp.parse_failed = true;
    return resp;
}

static std::string truncate_note(std::string note) {
    if (static_cast<int>(note.size()) > prompts::kNoteCharCap)
        note.resize(static_cast<std::size_t>(prompts::kNoteCharCap));
    return note;
}

static std::optional<NoteOp> parse_note_op(const json& j, std::vector<std::string>& warnings) {
    if (!j.is_object()) {
        warnings.push_back("note op is not an object");
        return std::nullopt;
    }
    if (j.contains("append")) {
        if (!j.at("append").is_string()) {
            warnings.push_back("malformed append op dropped");
            return std::nullopt;
        }
        return NoteOp{NoteOp::Kind::append, 0, truncate_note(j.at("append").get<std::string>())};
    }
    if (j.contains("replace")) {
        const json& body = j.at("replace");
        if (!body.is_object() || !body.contains("index") || !body.at("index").is_number_integer() ||
            !body.contains("note") || !body.at("note").is_string()) {
            warnings.push_back("malformed replace op dropped");
            return std::nullopt;
        }
        return NoteOp{NoteOp::Kind::replace, body.at("index").get<int>(),
                      truncate_note(body.at("note").get<std::string>())};
    }
    return std::nullopt;
}

PromptDeltaResponse parse_optimizer_response(const std::string& text) {
    PromptDeltaResponse resp;
    for (const json& obj : extract_json_objects(text)) {
        const bool has_ops = obj.contains("note_ops") && obj.at("note_ops").is_array();
        const bool bare_op = obj.contains("append") || obj.contains("replace");
        if (!has_ops && !bare_op) continue;

        if (obj.contains("rationale") && obj.at("rationale").is_string())
            resp.rationale = obj.at("rationale").get<std::string>();

        if (has_ops) {
            for (const json& entry : obj.at("note_ops"))
                if (auto op = parse_note_op(entry, resp.warnings)) resp.ops.push_back(std::move(*op));
        } else {
            if (auto op = parse_note_op(obj, resp.warnings)) resp.ops.push_back(std::move(*op));
        }
        return resp;
    }
    resp.parse_failed = true;
    return resp;
}

ArchResponse parse_architect_response(const std::string& text, const ConfigurationSpace& space,
                                      const ArchSpec& previous) {
    ArchResponse resp;
    for (const json& obj : extract_json_objects(text)) {
        if (!obj.contains("layer_widths") || !obj.at("layer_widths").is_array()) continue;

        std::vector<int> widths;
        bool ok = true;
        for (const json& w : obj.at("layer_widths")) {
            if (!w.is_number()) {
                ok = false;
                break;
            }
            widths.push_back(std::clamp(static_cast<int>(std::llround(w.get<double>())),
                                        space.min_width, space.max_width));
        }
        if (!ok || widths.empty()) continue;

        if (static_cast<int>(widths.size()) > space.max_layers)
            widths.resize(static_cast<std::size_t>(space.max_layers));
        while (static_cast<int>(widths.size()) < space.min_layers) widths.push_back(widths.back());

        resp.arch.layer_widths = widths;
        resp.arch.dropout = previous.dropout;
        resp.arch.activation = previous.activation;
        if (obj.contains("dropout") && obj.at("dropout").is_number()) {
            const NumericFieldSpec* f = space.find_numeric("dropout");
            const double lo = f ? f->lo : 0.0;
            const double hi = f ? f->hi : 0.9;
            resp.arch.dropout = std::clamp(obj.at("dropout").get<double>(), lo, hi);
        }
        if (obj.contains("activation") && obj.at("activation").is_string())
            if (auto a = activation_from_string(obj.at("activation").get<std::string>()))
                resp.arch.activation = *a;
        if (obj.contains("rationale") && obj.at("rationale").is_string())
            resp.rationale = obj.at("rationale").get<std::string>();
        return resp;
    }
    resp.arch = previous;
    resp.rationale = "parse-failure";
    resp.parse_failed = true;
    return resp;
}

PromptState apply_prompt_delta(const PromptState& prompt, const PromptDeltaResponse& delta) {
    PromptState out = prompt;
    for (const auto& op : delta.ops) {
        if (op.kind == NoteOp::Kind::append) {
            if (static_cast<int>(out.guidance_notes.size()) >= prompts::kMaxGuidanceNotes)
                out.guidance_notes.erase(out.guidance_notes.begin());  // evict oldest
            out.guidance_notes.push_back(truncate_note(op.note));
        } else {
            if (op.index >= 0 && op.index < static_cast<int>(out.guidance_notes.size())) {
                out.guidance_notes[static_cast<std::size_t>(op.index)] = truncate_note(op.note);
            } else {
                std::cerr << "[lgt] warning: replace index " << op.index
                          << " out of range; note op ignored" << std::endl;
            }
        }
    }
    return out;
}

}  // namespace lgt

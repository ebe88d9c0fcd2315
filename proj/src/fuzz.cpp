// SPDX-License-Identifier: Apache-2.0
#include "lgt/fuzz.hpp"

#include <sstream>

#include "lgt/agents.hpp"
#include "lgt/rng.hpp"

namespace lgt {

namespace {

std::string random_bytes(SeededRng& rng) {
    const int len = rng.uniform_int(0, 300);
    std::string s;
    s.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) s.push_back(static_cast<char>(rng.uniform_int(1, 255)));
    return s;
}

std::string brace_soup(SeededRng& rng) {
    static const char* tokens[] = {"{", "}", "[", "]", "\"", ":", ",", "set_numeric", "changes",
                                   "field", "success", "append", "true", "false", "1e9", "-3.5",
                                   "null", "\\", " ", "learning_rate"};
    const int len = rng.uniform_int(1, 60);
    std::string s;
    for (int i = 0; i < len; ++i) s += tokens[rng.uniform_int(0, 19)];
    return s;
}

std::string canonical_response(SeededRng& rng) {
    switch (rng.uniform_int(0, 3)) {
        case 0:
            return R"({"changes":[{"scale_numeric":{"field":"learning_rate","factor":0.5}},)"
                   R"({"set_categorical":{"field":"loss","value":"focal"}}],"rationale":"r"})";
        case 1:
            return R"({"success":true,"reason":"improved"})";
        case 2:
            return R"({"note_ops":[{"append":"keep changes small"}],"rationale":"r"})";
        default:
            return R"({"changes":[{"add_method":"noise"},{"no_change":true}]})";
    }
}

std::string truncated_canonical(SeededRng& rng) {
    std::string s = canonical_response(rng);
    const int cut = rng.uniform_int(0, static_cast<int>(s.size()));
    return s.substr(0, static_cast<std::size_t>(cut));
}

std::string nested_garbage(SeededRng& rng, int depth = 0) {
    if (depth > 4 || rng.uniform_int(0, 2) == 0) {
        switch (rng.uniform_int(0, 3)) {
            case 0: return std::to_string(rng.uniform(-1e6, 1e6));
            case 1: return "\"s" + std::to_string(rng.uniform_int(0, 999)) + "\"";
            case 2: return "true";
            default: return "null";
        }
    }
    std::ostringstream os;
    if (rng.uniform_int(0, 1) == 0) {
        os << "{";
        const int n = rng.uniform_int(0, 4);
        for (int i = 0; i < n; ++i)
            os << (i ? "," : "") << "\"k" << i << "\":" << nested_garbage(rng, depth + 1);
        os << "}";
    } else {
        os << "[";
        const int n = rng.uniform_int(0, 4);
        for (int i = 0; i < n; ++i) os << (i ? "," : "") << nested_garbage(rng, depth + 1);
        os << "]";
    }
    return os.str();
}

std::string schema_shaped(SeededRng& rng) {
    static const char* fields[] = {"learning_rate", "weight_decay", "warmup", "lion_rate",
                                   "batch_size", "focal_gamma", "class_weight.1", "class_weight.9"};
    static const char* cats[] = {"loss", "optimizer", "scheduler", "engine"};
    static const char* values[] = {"focal", "lion", "adamw", "cosine", "mse", "banana"};
    std::ostringstream os;
    os << R"({"changes":[)";
    const int n = rng.uniform_int(1, 4);
    for (int i = 0; i < n; ++i) {
        if (i) os << ",";
        switch (rng.uniform_int(0, 2)) {
            case 0:
                os << R"({"set_numeric":{"field":")" << fields[rng.uniform_int(0, 7)]
                   << R"(","value":)" << rng.uniform(-1e4, 1e4) << "}}";
                break;
            case 1:
                os << R"({"scale_numeric":{"field":")" << fields[rng.uniform_int(0, 7)]
                   << R"(","factor":)" << rng.uniform(-100.0, 100.0) << "}}";
                break;
            default:
                os << R"({"set_categorical":{"field":")" << cats[rng.uniform_int(0, 3)]
                   << R"(","value":")" << values[rng.uniform_int(0, 5)] << "\"}}";
        }
    }
    os << R"(],"rationale":"fuzz","surprise":42})";
    return os.str();
}

std::string embedded_in_prose(SeededRng& rng) {
    return "Sure! Here's my take on it.\n\n```json\n" + canonical_response(rng) +
           "\n```\nLet me know if you need anything else. {unbalanced";
}

bool delta_response_invariants_ok(const ConfigDeltaResponse& r) {
    if (r.parse_failed && !r.delta.is_no_change()) return false;
    for (const auto& ch : r.delta.changes) {
        switch (ch.kind) {
            case ConfigChange::Kind::set_numeric:
            case ConfigChange::Kind::scale_numeric:
                if (ch.field.empty()) return false;
                break;
            case ConfigChange::Kind::set_categorical:
                if (ch.field.empty() || ch.str_value.empty()) return false;
                break;
            case ConfigChange::Kind::add_method:
            case ConfigChange::Kind::remove_method:
                if (ch.str_value.empty()) return false;
                break;
            case ConfigChange::Kind::no_change:
                break;
        }
    }
    return true;
}

bool note_ops_invariants_ok(const PromptDeltaResponse& r) {
    if (r.parse_failed && !r.ops.empty()) return false;
    for (const auto& op : r.ops)
        if (static_cast<int>(op.note.size()) > prompts::kNoteCharCap) return false;
    return true;
}

}  // namespace

std::string FuzzReport::summary() const {
    std::ostringstream os;
    os << iterations << " iterations: " << aborts << " aborts, " << invariant_violations
       << " invariant violations, fallbacks advisor/evaluator/optimizer = " << advisor_fallbacks
       << "/" << evaluator_fallbacks << "/" << optimizer_fallbacks;
    return os.str();
}

FuzzReport fuzz_parsers(int iterations, std::uint64_t seed) {
    FuzzReport report;
    report.iterations = iterations;
    SeededRng rng(mix_seed(seed, 0xF022));
    const ConfigurationSpace space = ConfigurationSpace::standard(TaskType::classification, 3);

    for (int i = 0; i < iterations; ++i) {
        std::string input;
        switch (i % 6) {
            case 0: input = random_bytes(rng); break;
            case 1: input = brace_soup(rng); break;
            case 2: input = truncated_canonical(rng); break;
            case 3: input = nested_garbage(rng); break;
            case 4: input = schema_shaped(rng); break;
            default: input = embedded_in_prose(rng); break;
        }

        try {
            const ConfigDeltaResponse adv = parse_advisor_response(input, space);
            if (adv.parse_failed) ++report.advisor_fallbacks;
            if (!delta_response_invariants_ok(adv)) ++report.invariant_violations;

            const EvalResponse ev = parse_evaluator_response(input);
            if (ev.parse_failed) ++report.evaluator_fallbacks;
            if (ev.parse_failed && ev.success) ++report.invariant_violations;

            const PromptDeltaResponse op = parse_optimizer_response(input);
            if (op.parse_failed) ++report.optimizer_fallbacks;
            if (!note_ops_invariants_ok(op)) ++report.invariant_violations;
        } catch (...) {
            ++report.aborts;
        }
    }
    return report;
}

}  // namespace lgt

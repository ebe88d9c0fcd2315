// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgt/agents.hpp"

namespace lgt {

enum class AgentKind { advisor, evaluator, optimizer, architect };
std::string to_string(AgentKind k);

struct GenerationRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.2;
    int max_tokens = 1024;
    std::string model_name;
};

/// Backend wiring. `http` talks to a chat-completions endpoint; `scripted`
/// answers deterministically from the typed agent state.
struct BackendConfig {
    std::string kind = "scripted";  // "http" | "scripted"
    std::string endpoint_url;
    std::string api_key_env = "LGT_API_KEY";
    std::string model_name;
    int timeout_ms = 30000;
    int max_retries = 2;
    int retry_backoff_ms = 250;

    /// Configuration errors (missing url/key for http) fail fast here, never
    /// mid-run.
    void validate() const;

    nlohmann::json to_json() const;
    static BackendConfig from_json(const nlohmann::json& j);
};

/// Returned after retry exhaustion; every parser maps it to its safe no-op.
inline constexpr const char* kFailureSentinel = "[[lgt-generation-unavailable]]";

/// One agent invocation: the rendered prompts (sent over http, logged in the
/// transcript) plus the typed state the scripted rules match on.
struct AgentCall {
    AgentKind kind = AgentKind::advisor;
    GenerationRequest request;
    const AdvisorState* advisor = nullptr;
    const EvaluatorState* evaluator = nullptr;
    const OptimizerAgentState* optimizer = nullptr;
    const ArchitectState* architect = nullptr;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string generate(const AgentCall& call) = 0;
    virtual std::string name() const = 0;
};

/// POST {endpoint}/chat/completions with the open chat-completions body
/// shape; returns choices[0].message.content. Transport failures retry up to
/// max_retries with exponential backoff, then yield the failure sentinel.
std::string http_generate(const BackendConfig& config, const GenerationRequest& request);

class HttpBackend final : public Backend {
public:
    explicit HttpBackend(BackendConfig config);
    std::string generate(const AgentCall& call) override;
    std::string name() const override { return "http"; }

private:
    BackendConfig config_;
};

/// Condition -> response rule over the typed agent state. Responses are
/// canonical JSON the agent-core parsers accept.
struct ScriptedRule {
    std::string name;
    std::function<bool(const AgentCall&)> condition;
    std::function<nlohmann::json(const AgentCall&)> response;
};

struct ScriptedRuleSet {
    std::vector<ScriptedRule> rules;
};

/// The default deterministic heuristics (documented in backend_scripted.cpp).
ScriptedRuleSet default_scripted_rules();

/// First matching rule's response as a string; a built-in per-agent catch-all
/// keeps this total even for rule sets without one.
std::string scripted_generate(const ScriptedRuleSet& rules, const AgentCall& call);

class ScriptedBackend final : public Backend {
public:
    ScriptedBackend() : rules_(default_scripted_rules()) {}
    explicit ScriptedBackend(ScriptedRuleSet rules) : rules_(std::move(rules)) {}
    std::string generate(const AgentCall& call) override { return scripted_generate(rules_, call); }
    std::string name() const override { return "scripted"; }

private:
    ScriptedRuleSet rules_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config);

}  // namespace lgt

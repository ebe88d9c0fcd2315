// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "lgt/backend.hpp"

namespace lgt {

using nlohmann::json;

std::string to_string(AgentKind k) {
    switch (k) {
        case AgentKind::advisor: return "advisor";
        case AgentKind::evaluator: return "evaluator";
        case AgentKind::optimizer: return "optimizer";
        case AgentKind::architect: return "architect";
    }
    return "advisor";
}

void BackendConfig::validate() const {
    if (kind != "http" && kind != "scripted")
        throw std::invalid_argument("backend kind must be 'http' or 'scripted', got '" + kind + "'");
    if (kind == "http") {
        if (endpoint_url.empty())
            throw std::invalid_argument("http backend requires a non-empty endpoint_url");
        if (endpoint_url.rfind("http://", 0) != 0)
            throw std::invalid_argument(
                "http backend endpoint must start with http:// (TLS is not compiled in)");
        const char* key = std::getenv(api_key_env.c_str());
        if (key == nullptr || *key == '\0')
            throw std::invalid_argument("http backend requires the API key in $" + api_key_env);
        if (model_name.empty())
            throw std::invalid_argument("http backend requires a model name");
    }
    if (timeout_ms < 1 || max_retries < 0 || retry_backoff_ms < 0)
        throw std::invalid_argument("backend timeout/retry settings out of range");
}

json BackendConfig::to_json() const {
    return json{{"kind", kind},
                {"endpoint_url", endpoint_url},
                {"api_key_env", api_key_env},
                {"model_name", model_name},
                {"timeout_ms", timeout_ms},
                {"max_retries", max_retries},
                {"retry_backoff_ms", retry_backoff_ms}};
}

BackendConfig BackendConfig::from_json(const json& j) {
    BackendConfig c;
    c.kind = j.value("kind", std::string("scripted"));
    c.endpoint_url = j.value("endpoint_url", std::string());
    c.api_key_env = j.value("api_key_env", std::string("LGT_API_KEY"));
    c.model_name = j.value("model_name", std::string());
    c.timeout_ms = j.value("timeout_ms", 30000);
    c.max_retries = j.value("max_retries", 2);
    c.retry_backoff_ms = j.value("retry_backoff_ms", 250);
    return c;
}

struct ParsedUrl {
    std::string host;
    int port = 80;
    std::string path_prefix;
};

static ParsedUrl parse_http_url(const std::string& url) {
    ParsedUrl out;
    std::string rest = url.substr(std::string("http://").size());
    const std::size_t slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path_prefix = slash == std::string::npos ? "" : rest.substr(slash);
    if (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
    const std::size_t colon = hostport.find(':');
    if (colon == std::string::npos) {
        out.host = hostport;
    } else {
        out.host = hostport.substr(0, colon);
        out.port = std::atoi(hostport.c_str() + colon + 1);
    }
    return out;
}

std::string http_generate(const BackendConfig& config, const GenerationRequest& request) {
    const ParsedUrl url = parse_http_url(config.endpoint_url);
    const char* key = std::getenv(config.api_key_env.c_str());

    json body{{"model", request.model_name.empty() ? config.model_name : request.model_name},
              {"messages",
               json::array({json{{"role", "system"}, {"content", request.system_text}},
                            json{{"role", "user"}, {"content", request.user_text}}})},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
    const std::string payload = body.dump();

    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto backoff =
                std::chrono::milliseconds(config.retry_backoff_ms) * (1LL << (attempt - 1));
            std::this_thread::sleep_for(backoff);
        }

        httplib::Client cli(url.host, url.port);
        cli.set_connection_timeout(std::chrono::milliseconds(config.timeout_ms));
        cli.set_read_timeout(std::chrono::milliseconds(config.timeout_ms));
        cli.set_write_timeout(std::chrono::milliseconds(config.timeout_ms));

        httplib::Headers headers;
        if (key != nullptr && *key != '\0')
            headers.emplace("Authorization", std::string("Bearer ") + key);

        auto res = cli.Post(url.path_prefix + "/chat/completions", headers, payload,
                            "application/json");
        if (!res || res->status < 200 || res->status >= 300) continue;

        json parsed = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded()) continue;
        if (parsed.contains("choices") && parsed["choices"].is_array() &&
            !parsed["choices"].empty()) {
            const json& first = parsed["choices"][0];
            if (first.contains("message") && first["message"].contains("content") &&
                first["message"]["content"].is_string())
                return first["message"]["content"].get<std::string>();
        }
    }
    return kFailureSentinel;
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    config_.validate();
    if (config_.kind != "http") throw std::invalid_argument("HttpBackend requires kind 'http'");
}

std::string HttpBackend::generate(const AgentCall& call) {
    return http_generate(config_, call.request);
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
    config.validate();
    if (config.kind == "http") return std::make_unique<HttpBackend>(config);
    return std::make_unique<ScriptedBackend>();
}

}  // namespace lgt

#pragma once

// OpenAI-style chat-completions client. The credential comes from the
// DIALEVAL_API_KEY environment variable; decoding defaults to temperature 0
// with a short completion cap since the prompts ask for a bare score.
// Plain-HTTP endpoints only unless the vendored httplib is built with TLS.

#include <cstdlib>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "dialeval/judge/client.hpp"

namespace dialeval::judge {

struct HttpClientConfig {
    std::string base_url = "http://localhost:8000";
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4";
    std::string api_key_env = "DIALEVAL_API_KEY";
    double temperature = 0.0;
    int max_tokens = 8;
    double timeout_seconds = 30.0;
};

class HttpLlmClient : public LlmClient {
   public:
    explicit HttpLlmClient(HttpClientConfig config) : config_(std::move(config)) {}

    std::string complete(const std::string& prompt) override {
        nlohmann::json body = {
            {"model", config_.model},
            {"temperature", config_.temperature},
            {"max_tokens", config_.max_tokens},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};

        httplib::Client http(config_.base_url);
        http.set_read_timeout(static_cast<time_t>(config_.timeout_seconds), 0);
        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);

        auto res = http.Post(config_.path, headers, body.dump(), "application/json");
        if (!res) throw JudgeError("llm endpoint unreachable: " + config_.base_url);
        if (res->status != 200)
            throw JudgeError("llm endpoint returned status " + std::to_string(res->status) +
                             ": " + res->body);
        nlohmann::json reply = nlohmann::json::parse(res->body);
        if (!reply.contains("choices") || reply["choices"].empty())
            throw JudgeError("llm reply carries no choices: " + res->body);
        return reply["choices"][0]["message"]["content"].get<std::string>();
    }

   private:
    HttpClientConfig config_;
};

}  // namespace dialeval::judge

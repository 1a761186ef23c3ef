#pragma once

// Pluggable completion clients. Implementations must be safe to call twice
// with the same prompt (retries). The bundled mock clients keep the whole
// judge pipeline runnable offline; HttpLlmClient speaks an OpenAI-style chat
// completions endpoint.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "dialeval/judge/criteria.hpp"

namespace dialeval::judge {

struct LlmClientConfig {
    double timeout_seconds = 30.0;
    int max_retries = 2;              // per criterion, on malformed output
    int backoff_initial_ms = 250;     // doubles per retry; 0 in tests
    double requests_per_second = 2.0; // token bucket refill rate
    int max_in_flight = 1;
};

class LlmClient {
   public:
    virtual ~LlmClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// Recovers which criterion a rendered prompt asks about (footer line).
inline Criterion criterion_from_prompt(const std::string& prompt) {
    for (Criterion c : kAllCriteria) {
        std::string footer = "\n" + criterion_name(c) + ": ";
        if (prompt.find(footer) != std::string::npos) return c;
    }
    throw JudgeError("prompt carries no known criterion footer");
}

// Answers every prompt via a user function of the criterion.
class MockPatternClient : public LlmClient {
   public:
    explicit MockPatternClient(std::function<int(Criterion)> score_of)
        : score_of_(std::move(score_of)) {}
    explicit MockPatternClient(int fixed_score)
        : score_of_([fixed_score](Criterion) { return fixed_score; }) {}

    std::string complete(const std::string& prompt) override {
        Criterion c = criterion_from_prompt(prompt);
        return criterion_name(c) + ": " + std::to_string(score_of_(c));
    }

   private:
    std::function<int(Criterion)> score_of_;
};

// Replays a fixed queue of completions, whatever the prompt.
class ScriptedClient : public LlmClient {
   public:
    explicit ScriptedClient(std::deque<std::string> completions)
        : completions_(std::move(completions)) {}

    std::string complete(const std::string&) override {
        std::lock_guard<std::mutex> lock(mu_);
        if (completions_.empty()) throw JudgeError("scripted client ran out of completions");
        std::string out = completions_.front();
        completions_.pop_front();
        return out;
    }

   private:
    std::mutex mu_;
    std::deque<std::string> completions_;
};

// Looks up scores by (pair id, criterion); the runner announces the pair id
// before dispatching its prompts.
class ReplayClient : public LlmClient {
   public:
    void add(const std::string& pair_id, Criterion c, const std::string& completion) {
        transcript_[{pair_id, static_cast<int>(c)}] = completion;
    }

    void set_current_pair(const std::string& pair_id) {
        std::lock_guard<std::mutex> lock(mu_);
        current_pair_ = pair_id;
    }

    std::string complete(const std::string& prompt) override {
        std::lock_guard<std::mutex> lock(mu_);
        Criterion c = criterion_from_prompt(prompt);
        auto it = transcript_.find({current_pair_, static_cast<int>(c)});
        if (it == transcript_.end())
            throw JudgeError("replay transcript has no entry for pair '" + current_pair_ +
                             "' criterion " + criterion_name(c));
        return it->second;
    }

   private:
    std::mutex mu_;
    std::string current_pair_;
    std::map<std::pair<std::string, int>, std::string> transcript_;
};

// Simple token bucket; acquire() blocks until a token is available.
class TokenBucket {
   public:
    TokenBucket(double rate_per_second, double burst)
        : rate_(rate_per_second), capacity_(burst), tokens_(burst),
          last_(std::chrono::steady_clock::now()) {}

    void acquire() {
        while (true) {
            {
                std::lock_guard<std::mutex> lock(mu_);
                refill();
                if (tokens_ >= 1.0) {
                    tokens_ -= 1.0;
                    return;
                }
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }

   private:
    void refill() {
        auto now = std::chrono::steady_clock::now();
        double elapsed = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
    }

    std::mutex mu_;
    double rate_, capacity_, tokens_;
    std::chrono::steady_clock::time_point last_;
};

}  // namespace dialeval::judge

#pragma once

// Judging loop: one prompt per criterion, bounded retries with a clarifying
// line appended on malformed output, audit of every raw completion, mean over
// the criteria that produced a score.

#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "json.hpp"

#include "dialeval/amr/penman.hpp"
#include "dialeval/judge/client.hpp"
#include "dialeval/judge/prompt.hpp"
#include "dialeval/slm/pair.hpp"

namespace dialeval::judge {

inline int parse_criterion_score(const std::string& completion_text, Criterion criterion) {
    auto parse_int = [](const std::string& s) -> std::optional<int> {
        if (s.empty()) return std::nullopt;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        return std::stoi(s);
    };
    auto validate = [&](int v) {
        if (v < 1 || v > 5)
            throw ScoreParseError("score out of range [1,5]: " + std::to_string(v),
                                  completion_text);
        return v;
    };

    std::string text = trim(completion_text);

    // "<Criterion>: <n>"
    std::string prefix = lowercase(criterion_name(criterion)) + ":";
    if (lowercase(text).rfind(prefix, 0) == 0) {
        std::string rest = trim(text.substr(prefix.size()));
        auto tokens = split_ws(rest);
        if (!tokens.empty())
            if (auto v = parse_int(tokens[0])) return validate(*v);
    }

    // bare integer, or an integer as the first token
    auto tokens = split_ws(text);
    if (!tokens.empty())
        if (auto v = parse_int(tokens[0])) return validate(*v);

    throw ScoreParseError("no score found in completion", completion_text);
}

struct CriterionOutcome {
    Criterion criterion = Criterion::Naturalness;
    bool succeeded = false;
    int score = 0;
    int retries = 0;
    std::vector<std::string> completions;  // raw, one per attempt
    std::string error;                     // last failure when !succeeded
};

struct JudgeResult {
    std::string pair_id;
    double slm_score_used = 0.0;
    std::vector<CriterionOutcome> outcomes;  // kAllCriteria order
    double mean_score = 0.0;                 // over succeeded criteria
    int succeeded_count = 0;

    const CriterionOutcome& outcome(Criterion c) const {
        return outcomes[static_cast<size_t>(c)];
    }
};

inline nlohmann::json to_json(const JudgeResult& result) {
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& o : result.outcomes) {
        nlohmann::json j = {{"criterion", criterion_name(o.criterion)},
                            {"retries", o.retries},
                            {"completions", o.completions}};
        if (o.succeeded)
            j["score"] = o.score;
        else
            j["error"] = o.error;
        outcomes.push_back(j);
    }
    return {{"pair_id", result.pair_id},
            {"slm_score", result.slm_score_used},
            {"mean_score", result.mean_score},
            {"outcomes", outcomes}};
}

inline JudgeResult judge_result_from_json(const nlohmann::json& j) {
    JudgeResult result;
    result.pair_id = j.at("pair_id").get<std::string>();
    result.slm_score_used = j.at("slm_score").get<double>();
    result.mean_score = j.at("mean_score").get<double>();
    for (const auto& oj : j.at("outcomes")) {
        CriterionOutcome o;
        o.criterion = criterion_from_name(oj.at("criterion").get<std::string>());
        o.retries = oj.at("retries").get<int>();
        o.completions = oj.at("completions").get<std::vector<std::string>>();
        if (oj.contains("score")) {
            o.succeeded = true;
            o.score = oj["score"].get<int>();
            ++result.succeeded_count;
        } else {
            o.error = oj.value("error", "");
        }
        result.outcomes.push_back(std::move(o));
    }
    return result;
}

using PersistFn = std::function<void(const JudgeResult&)>;

inline JudgeResult judge_texts(const std::string& pair_id, const std::string& context_text,
                               const std::string& response_text, const std::string& amr_text,
                               double slm_score, LlmClient& client,
                               const LlmClientConfig& config = {},
                               const PersistFn& persist = nullptr) {
    JudgeResult result;
    result.pair_id = pair_id;
    result.slm_score_used = slm_score;

    for (Criterion c : kAllCriteria) {
        CriterionOutcome outcome;
        outcome.criterion = c;
        std::string prompt =
            build_prompt(c, context_text, response_text, amr_text, slm_score).rendered_text;
        for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
            outcome.retries = attempt;
            try {
                std::string completion = client.complete(prompt);
                outcome.completions.push_back(completion);
                outcome.score = parse_criterion_score(completion, c);
                outcome.succeeded = true;
                break;
            } catch (const ScoreParseError& e) {
                outcome.error = e.what();
            } catch (const JudgeError& e) {
                outcome.error = e.what();
            }
            if (attempt < config.max_retries) {
                prompt += "\nRespond with a single integer from 1 to 5.\n";
                if (config.backoff_initial_ms > 0)
                    std::this_thread::sleep_for(std::chrono::milliseconds(
                        config.backoff_initial_ms << attempt));
            }
        }
        result.outcomes.push_back(std::move(outcome));
    }

    double sum = 0;
    for (const auto& o : result.outcomes) {
        if (o.succeeded) {
            sum += o.score;
            ++result.succeeded_count;
        }
    }
    if (result.succeeded_count == 0)
        throw JudgeError("all four criteria failed for pair " + pair_id);
    result.mean_score = sum / result.succeeded_count;

    if (persist) persist(result);
    return result;
}

inline JudgeResult judge_response(const slm::DialoguePair& pair, double slm_score,
                                  LlmClient& client, const LlmClientConfig& config = {},
                                  const PersistFn& persist = nullptr) {
    if (!pair.has_graphs) throw JudgeError("pair has no AMR graphs attached: " + pair.id);
    amr::AmrGraph merged =
        amr::merge_context_response_graphs(pair.context_graph, pair.response_graph);
    return judge_texts(pair.id, join_context(pair.context), pair.response,
                       amr::serialize_penman(merged), slm_score, client, config, persist);
}

// Rate limit in front of any client; safe to share across workers.
class RateLimitedClient : public LlmClient {
   public:
    RateLimitedClient(LlmClient& inner, double requests_per_second, double burst)
        : inner_(inner), bucket_(requests_per_second, burst) {}

    std::string complete(const std::string& prompt) override {
        bucket_.acquire();
        return inner_.complete(prompt);
    }

   private:
    LlmClient& inner_;
    TokenBucket bucket_;
};

struct JudgeJob {
    const slm::DialoguePair* pair = nullptr;
    double slm_score = 0.0;
};

// Judges a whole set. Results are keyed by job index, so dispatch order does
// not matter; up to max_in_flight pairs run concurrently behind a shared
// token bucket. A ReplayClient forces sequential dispatch because its lookups
// are scoped to the announced pair.
inline std::vector<JudgeResult> judge_eval_set(const std::vector<JudgeJob>& jobs,
                                               LlmClient& client, const LlmClientConfig& config,
                                               const PersistFn& persist = nullptr) {
    std::vector<JudgeResult> results(jobs.size());
    RateLimitedClient limited(client, config.requests_per_second,
                              std::max(1, config.max_in_flight));

    auto* replay = dynamic_cast<ReplayClient*>(&client);
    if (config.max_in_flight <= 1 || replay) {
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (replay) replay->set_current_pair(jobs[i].pair->id);
            results[i] =
                judge_response(*jobs[i].pair, jobs[i].slm_score, limited, config, persist);
        }
        return results;
    }

    std::atomic<size_t> next{0};
    std::mutex persist_mu;
    std::vector<std::exception_ptr> errors(jobs.size());
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                PersistFn locked_persist;
                if (persist)
                    locked_persist = [&](const JudgeResult& r) {
                        std::lock_guard<std::mutex> lock(persist_mu);
                        persist(r);
                    };
                results[i] = judge_response(*jobs[i].pair, jobs[i].slm_score, limited, config,
                                            locked_persist);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < config.max_in_flight; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

// Append-only line-delimited audit writer.
class AuditLog {
   public:
    explicit AuditLog(const std::string& path) : out_(path, std::ios::app) {
        if (!out_) throw IoError("cannot open audit log: " + path);
    }

    PersistFn sink() {
        return [this](const JudgeResult& r) {
            out_ << to_json(r).dump() << '\n';
            out_.flush();
        };
    }

   private:
    std::ofstream out_;
};

}  // namespace dialeval::judge

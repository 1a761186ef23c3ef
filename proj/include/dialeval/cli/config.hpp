#pragma once

// Flat key = value configuration with '#' comments. Precedence is
// CLI override > config file > built-in default; the resolved snapshot is
// what lands in the run manifest. Unknown keys are rejected.

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "dialeval/common.hpp"

namespace dialeval::cli {

inline const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        // inputs and outputs
        "dataset", "dataset_format", "preprocessed", "out_dir", "seed",
        // amr preprocessing
        "amr_backend", "amr_fixture", "amr_command", "amr_cache",
        // model dimensions
        "width", "seq_layers", "seq_heads", "ff_multiplier", "graph_layers",
        // training
        "epochs", "batch_size", "learning_rate", "tau", "grad_clip", "val_fraction",
        "use_gate", "use_contrastive", "encoder_mode", "pretrained_sequence",
        // scoring / judging / evaluation
        "checkpoint", "judge_client", "mock_score", "replay_transcript", "max_retries",
        "backoff_ms", "requests_per_second", "max_in_flight",
        "http_base_url", "http_path", "http_model", "http_api_key_env",
        "n_per_set", "eval_seed", "annotations", "judge_results",
        // attention export
        "pair_id",
    };
    return keys;
}

class Config {
   public:
    static Config defaults() {
        Config c;
        c.values_ = {
            {"dataset_format", "dailydialogpp"},
            {"out_dir", "runs"},
            {"seed", "1"},
            {"amr_backend", "fixture"},
            {"amr_cache", ""},
            {"width", "64"},
            {"seq_layers", "2"},
            {"seq_heads", "2"},
            {"ff_multiplier", "2"},
            {"graph_layers", "2"},
            {"epochs", "20"},
            {"batch_size", "16"},
            {"learning_rate", "0.001"},
            {"tau", "0.1"},
            {"grad_clip", "1.0"},
            {"val_fraction", "0.2"},
            {"use_gate", "true"},
            {"use_contrastive", "true"},
            {"encoder_mode", "both"},
            {"judge_client", "mock"},
            {"mock_score", "3"},
            {"max_retries", "2"},
            {"backoff_ms", "250"},
            {"requests_per_second", "2.0"},
            {"max_in_flight", "1"},
            {"http_base_url", "http://localhost:8000"},
            {"http_path", "/v1/chat/completions"},
            {"http_model", "gpt-4"},
            {"http_api_key_env", "DIALEVAL_API_KEY"},
            {"n_per_set", "6"},
            {"eval_seed", "11"},
        };
        return c;
    }

    static Config load(const std::string& path) {
        Config c = defaults();
        int line_no = 0;
        for (const auto& line : split_lines(read_file(path))) {
            ++line_no;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) +
                                  " is not 'key = value': " + t);
            c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        }
        return c;
    }

    void set(const std::string& key, const std::string& value) {
        if (!known_config_keys().count(key)) throw ConfigError("unknown config key: " + key);
        values_[key] = value;
        explicit_.insert(key);
    }

    // true when the key came from the config file or a CLI override rather
    // than the built-in defaults
    bool was_set(const std::string& key) const { return explicit_.count(key) > 0; }

    bool has(const std::string& key) const {
        auto it = values_.find(key);
        return it != values_.end() && !it->second.empty();
    }

    std::string get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end() || it->second.empty())
            throw ConfigError("missing required config key: " + key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() || it->second.empty() ? fallback : it->second;
    }

    int get_int(const std::string& key) const {
        try {
            return std::stoi(get(key));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config key '" + key + "' is not an integer");
        }
    }

    double get_double(const std::string& key) const {
        try {
            return std::stod(get(key));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config key '" + key + "' is not a number");
        }
    }

    bool get_bool(const std::string& key) const {
        std::string v = lowercase(get(key));
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config key '" + key + "' is not a boolean");
    }

    std::uint64_t get_seed(const std::string& key) const {
        return static_cast<std::uint64_t>(std::stoull(get(key)));
    }

    // Canonical snapshot: sorted key = value lines.
    std::string snapshot() const {
        std::ostringstream out;
        for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
        return out.str();
    }

   private:
    std::map<std::string, std::string> values_;
    std::set<std::string> explicit_;
};

}  // namespace dialeval::cli

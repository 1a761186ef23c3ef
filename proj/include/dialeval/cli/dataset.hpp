#pragma once

// Dataset ingestion. On-disk format is line-delimited JSON records:
//
//   {"context": ["turn 1", "turn 2"],
//    "positive_responses": [...],
//    "random_negative_responses": [...],     (dailydialogpp format)
//    "adversarial_negative_responses": [...],
//    "graphs": {"<exact text>": "<PENMAN>"}}  (filled by preprocess-amr)
//
// Formats: "dailydialogpp" expects all three response lists (five each in the
// upstream release; other counts are reported, not rejected);
// "augmented_pairs" expects positives plus adversarial counterparts only.
// Record ids derive from content hashes, so ingestion is pure.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dialeval/amr/merge.hpp"
#include "dialeval/amr/penman.hpp"
#include "dialeval/common.hpp"
#include "dialeval/train/examples.hpp"

namespace dialeval::cli {

enum class DatasetFormat { DailyDialogPP, AugmentedPairs };

inline DatasetFormat dataset_format_from_name(const std::string& name) {
    if (name == "dailydialogpp") return DatasetFormat::DailyDialogPP;
    if (name == "augmented_pairs") return DatasetFormat::AugmentedPairs;
    throw ConfigError("unknown dataset format: " + name);
}

struct DatasetRecord {
    std::string id;
    std::vector<std::string> context;
    std::vector<std::string> positive_responses;
    std::vector<std::string> random_negative_responses;
    std::vector<std::string> adversarial_negative_responses;
    std::map<std::string, std::string> graphs;  // text -> PENMAN

    std::vector<std::string> all_texts() const {
        std::vector<std::string> out = context;
        for (const auto* list :
             {&positive_responses, &random_negative_responses, &adversarial_negative_responses})
            out.insert(out.end(), list->begin(), list->end());
        return out;
    }

    bool has_graph(const std::string& text) const { return graphs.count(text) > 0; }
};

struct IngestResult {
    std::vector<DatasetRecord> records;
    std::vector<std::string> warnings;
    size_t positive_count = 0;
    size_t random_count = 0;
    size_t adversarial_count = 0;
};

namespace dataset_detail {

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& field,
                                            size_t record_index, bool required) {
    if (!j.contains(field)) {
        if (required)
            throw FormatError("record " + std::to_string(record_index) + ": missing field '" +
                              field + "'");
        return {};
    }
    if (!j[field].is_array())
        throw FormatError("record " + std::to_string(record_index) + ": field '" + field +
                          "' must be a list");
    std::vector<std::string> out;
    for (const auto& e : j[field]) {
        if (!e.is_string())
            throw FormatError("record " + std::to_string(record_index) + ": field '" + field +
                              "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline std::string content_id(const DatasetRecord& r) {
    std::string joined;
    for (const auto& t : r.context) joined += t + "\x1e";
    joined += "\x1d";
    for (const auto* list :
         {&r.positive_responses, &r.random_negative_responses, &r.adversarial_negative_responses}) {
        for (const auto& t : *list) joined += t + "\x1e";
        joined += "\x1d";
    }
    return hex64(fnv1a64(joined)).substr(0, 12);
}

}  // namespace dataset_detail

inline IngestResult ingest_dataset(const std::string& path, DatasetFormat format) {
    IngestResult result;
    std::string text = read_file(path);
    if (trim(text).empty()) {
        result.warnings.push_back("dataset file is empty: " + path);
        return result;
    }

    size_t index = 0;
    for (const auto& line : split_lines(text)) {
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError("record " + std::to_string(index) + ": invalid JSON: " + e.what());
        }

        DatasetRecord record;
        record.context = dataset_detail::string_list(j, "context", index, true);
        if (record.context.empty())
            throw FormatError("record " + std::to_string(index) + ": empty context");
        record.positive_responses =
            dataset_detail::string_list(j, "positive_responses", index, true);
        if (record.positive_responses.empty())
            throw FormatError("record " + std::to_string(index) +
                              ": needs at least one positive response");
        bool want_random = format == DatasetFormat::DailyDialogPP;
        record.random_negative_responses =
            dataset_detail::string_list(j, "random_negative_responses", index, want_random);
        record.adversarial_negative_responses =
            dataset_detail::string_list(j, "adversarial_negative_responses", index, true);

        if (j.contains("graphs")) {
            for (const auto& [key, value] : j["graphs"].items())
                record.graphs[key] = value.get<std::string>();
        }
        record.id = dataset_detail::content_id(record);

        result.positive_count += record.positive_responses.size();
        result.random_count += record.random_negative_responses.size();
        result.adversarial_count += record.adversarial_negative_responses.size();
        result.records.push_back(std::move(record));
        ++index;
    }

    if (format == DatasetFormat::DailyDialogPP) {
        for (size_t i = 0; i < result.records.size(); ++i) {
            const auto& r = result.records[i];
            if (r.positive_responses.size() != 5 || r.random_negative_responses.size() != 5 ||
                r.adversarial_negative_responses.size() != 5) {
                result.warnings.push_back("record " + std::to_string(i) + " (" + r.id +
                                          ") has response counts " +
                                          std::to_string(r.positive_responses.size()) + "/" +
                                          std::to_string(r.random_negative_responses.size()) +
                                          "/" +
                                          std::to_string(r.adversarial_negative_responses.size()) +
                                          ", upstream ships 5/5/5");
                break;  // one audit line is enough
            }
        }
    }
    return result;
}

inline std::string render_dataset(const std::vector<DatasetRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        nlohmann::json j;
        j["context"] = r.context;
        j["positive_responses"] = r.positive_responses;
        if (!r.random_negative_responses.empty())
            j["random_negative_responses"] = r.random_negative_responses;
        j["adversarial_negative_responses"] = r.adversarial_negative_responses;
        if (!r.graphs.empty()) j["graphs"] = r.graphs;
        out << j.dump() << '\n';
    }
    return out.str();
}

// Expands records into labeled examples; graphs are attached when present.
// A multi-utterance context becomes one merged multi-sentence graph.
inline std::vector<train::TrainingExample> expand_records(
    const std::vector<DatasetRecord>& records, bool require_graphs = false) {
    std::vector<train::TrainingExample> out;
    for (const auto& record : records) {
        auto context_graph = [&]() -> std::pair<bool, amr::AmrGraph> {
            std::vector<amr::AmrGraph> graphs;
            for (const auto& turn : record.context) {
                if (!record.has_graph(turn)) return {false, {}};
                graphs.push_back(amr::parse_penman(record.graphs.at(turn)));
            }
            if (graphs.size() == 1) return {true, graphs[0]};
            return {true, amr::merge_sentence_graphs(graphs)};
        }();

        auto build = [&](const std::string& response, int label, train::NegativeKind kind,
                         const std::string& suffix) {
            slm::DialoguePair pair;
            pair.id = record.id + "-" + suffix;
            pair.context = record.context;
            pair.response = response;
            if (context_graph.first && record.has_graph(response)) {
                pair.context_graph = context_graph.second;
                pair.response_graph = amr::parse_penman(record.graphs.at(response));
                pair.has_graphs = true;
            } else if (require_graphs) {
                throw FormatError("missing AMR graph for pair " + pair.id +
                                  "; run preprocess-amr first");
            }
            out.push_back({std::move(pair), label, kind});
        };

        for (size_t i = 0; i < record.positive_responses.size(); ++i)
            build(record.positive_responses[i], 1, train::NegativeKind::None,
                  "p" + std::to_string(i));
        for (size_t i = 0; i < record.random_negative_responses.size(); ++i)
            build(record.random_negative_responses[i], 0, train::NegativeKind::Random,
                  "r" + std::to_string(i));
        for (size_t i = 0; i < record.adversarial_negative_responses.size(); ++i)
            build(record.adversarial_negative_responses[i], 0, train::NegativeKind::Adversarial,
                  "a" + std::to_string(i));
    }
    return out;
}

}  // namespace dialeval::cli

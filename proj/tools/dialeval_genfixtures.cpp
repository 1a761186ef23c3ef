// Regenerates the bundled fixture tree: small datasets in both formats, the
// sentence -> PENMAN fixture file backing the fixture AMR backend, unanimous
// three-annotator score files, and a replay transcript whose completions
// equal the annotation averages. Output is deterministic.

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dialeval/common.hpp"
#include "dialeval/judge/criteria.hpp"

using dialeval::fnv1a64;
using dialeval::write_file;
using nlohmann::json;

namespace {

const std::vector<std::string> kTopics = {"garden", "canyon", "piano",
                                          "soccer", "coffee", "novel"};

std::vector<std::string> context_turns(const std::string& topic) {
    return {"what about the " + topic, "is it worth a closer look"};
}

std::string context_graph(const std::string& topic) {
    return "(worth-02 :polarity (amr-unk) :ARG1 (" + topic + "))";
}

struct Texts {
    std::vector<std::string> positives, randoms, adversarials;
};

Texts responses_for(size_t topic_index) {
    const std::string& topic = kTopics[topic_index];
    const std::string& other = kTopics[(topic_index + 2) % kTopics.size()];
    Texts t;
    t.positives = {"yes the " + topic + " is really worth it",
                   "sure the " + topic + " is truly worth a visit",
                   "indeed the " + topic + " is well worth your time",
                   "absolutely the " + topic + " deserves a look",
                   "yes the " + topic + " is quite rewarding"};
    t.randoms = {"anyway the " + other + " is really worth it",
                 "anyway the " + other + " is truly worth a visit",
                 "anyway you should hear about the " + other,
                 "anyway the " + other + " deserves a look",
                 "anyway the " + other + " is quite rewarding"};
    t.adversarials = {"the " + other + " was really worth it for the " + topic,
                      "my " + other + " story is truly worth the " + topic,
                      "the " + other + " is well worth more than the " + topic,
                      "a " + other + " deserves the " + topic + " look",
                      "the " + other + " is quite rewarding like the " + topic};
    return t;
}

std::string response_graph(const std::string& text, size_t topic_index, char kind, int k) {
    const std::string& topic = kTopics[topic_index];
    const std::string& other = kTopics[(topic_index + 2) % kTopics.size()];
    (void)text;
    (void)k;
    switch (kind) {
        case 'p': return "(recommend-01 :ARG1 (" + topic + ") :degree (really))";
        case 'r': return "(recommend-01 :ARG1 (" + other + ") :degree (really))";
        default: return "(worth-02 :ARG1 (" + other + ") :mod (" + topic + "))";
    }
}

int gold_score(const std::string& pair_id, dialeval::judge::Criterion c) {
    return 1 + static_cast<int>(
                   fnv1a64(pair_id + "#" + dialeval::judge::criterion_name(c)) % 5);
}

// mirrors cli::dataset_detail::content_id
std::string record_id(const json& record) {
    std::string joined;
    for (const auto& t : record["context"]) joined += t.get<std::string>() + "\x1e";
    joined += "\x1d";
    for (const char* field :
         {"positive_responses", "random_negative_responses", "adversarial_negative_responses"}) {
        if (record.contains(field))
            for (const auto& t : record[field]) joined += t.get<std::string>() + "\x1e";
        joined += "\x1d";
    }
    return dialeval::hex64(fnv1a64(joined)).substr(0, 12);
}

}  // namespace

int main(int argc, char** argv) {
    std::string root = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(root + "/datasets");
    std::filesystem::create_directories(root + "/amr");
    std::filesystem::create_directories(root + "/annotations");
    std::filesystem::create_directories(root + "/judge");

    std::ostringstream train_small, eval_pairs, graph_fixture;

    auto emit_graph = [&](const std::string& text, const std::string& penman) {
        graph_fixture << json{{"text", text}, {"penman", penman}}.dump() << '\n';
    };

    // train_small.jsonl: augmented_pairs format, 4 contexts x (5 pos + 5 adv)
    for (size_t t = 0; t < 4; ++t) {
        Texts texts = responses_for(t);
        json record = {{"context", context_turns(kTopics[t])},
                       {"positive_responses", texts.positives},
                       {"adversarial_negative_responses", texts.adversarials}};
        train_small << record.dump() << '\n';
    }

    // eval_pairs.jsonl: dailydialogpp format, 3 contexts x 5/5/5
    std::vector<std::string> eval_pair_ids;
    for (size_t t = 0; t < 3; ++t) {
        Texts texts = responses_for(t);
        json record = {{"context", context_turns(kTopics[t])},
                       {"positive_responses", texts.positives},
                       {"random_negative_responses", texts.randoms},
                       {"adversarial_negative_responses", texts.adversarials}};
        eval_pairs << record.dump() << '\n';
        std::string id = record_id(record);
        for (int k = 0; k < 5; ++k) eval_pair_ids.push_back(id + "-p" + std::to_string(k));
        for (int k = 0; k < 5; ++k) eval_pair_ids.push_back(id + "-r" + std::to_string(k));
        for (int k = 0; k < 5; ++k) eval_pair_ids.push_back(id + "-a" + std::to_string(k));
    }

    // graph fixture covering every text in both datasets
    for (size_t t = 0; t < kTopics.size(); ++t) {
        for (size_t turn = 0; turn < 2; ++turn)
            emit_graph(context_turns(kTopics[t])[turn], context_graph(kTopics[t]));
        Texts texts = responses_for(t);
        for (int k = 0; k < 5; ++k) {
            emit_graph(texts.positives[k], response_graph(texts.positives[k], t, 'p', k));
            emit_graph(texts.randoms[k], response_graph(texts.randoms[k], t, 'r', k));
            emit_graph(texts.adversarials[k], response_graph(texts.adversarials[k], t, 'a', k));
        }
    }

    // unanimous annotations + a replay transcript that echoes them
    std::ostringstream annotations, transcript;
    for (const auto& pair_id : eval_pair_ids) {
        for (dialeval::judge::Criterion c : dialeval::judge::kAllCriteria) {
            int score = gold_score(pair_id, c);
            for (const char* annotator : {"a1", "a2", "a3"})
                annotations << pair_id << '\t' << annotator << '\t'
                            << dialeval::judge::criterion_name(c) << '\t' << score << '\n';
            transcript << json{{"pair_id", pair_id},
                               {"criterion", dialeval::judge::criterion_name(c)},
                               {"completion", dialeval::judge::criterion_name(c) + ": " +
                                                  std::to_string(score)}}
                              .dump()
                       << '\n';
        }
    }

    write_file(root + "/datasets/train_small.jsonl", train_small.str());
    write_file(root + "/datasets/eval_pairs.jsonl", eval_pairs.str());
    write_file(root + "/amr/fixture_graphs.jsonl", graph_fixture.str());
    write_file(root + "/annotations/eval_annotations.tsv", annotations.str());
    write_file(root + "/judge/replay_transcript.jsonl", transcript.str());
    std::printf("fixtures written under %s\n", root.c_str());
    return 0;
}

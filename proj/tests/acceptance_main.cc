// Acceptance suite: every criterion below runs at its stated tolerance and
// prints exactly one [PASS]/[FAIL]/[SKIP] line. Exit status is non-zero if
// any gating criterion fails.
//
// usage: acceptance <fixtures_dir> <dialeval_binary>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dialeval/amr/merge.hpp"
#include "dialeval/amr/penman.hpp"
#include "dialeval/amr/simplify.hpp"
#include "dialeval/eval/report.hpp"
#include "dialeval/judge/prompt.hpp"
#include "dialeval/slm/scorer.hpp"
#include "dialeval/stats/correlation.hpp"
#include "dialeval/stats/kappa.hpp"
#include "dialeval/train/losses.hpp"
#include "dialeval/train/synthetic.hpp"
#include "dialeval/train/trainer.hpp"
#include "json.hpp"
#include "support/graph_gen.hpp"
#include "support/stats_reference.hpp"

using namespace dialeval;
namespace fs = std::filesystem;

namespace {

std::string g_fixtures;
std::string g_binary;
std::string g_scratch;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

std::string fixture_path(const std::string& rel) { return g_fixtures + "/" + rel; }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- 1. AMR round-trip and simplification idempotence ----------------------
Outcome criterion_amr_round_trip() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();

    amr::AmrGraph worked = amr::parse_penman(read_file(fixture_path(
        "penman/sightseeing_merged.penman")));
    if (!amr::structurally_equal(amr::parse_penman(amr::serialize_penman(worked)), worked))
        out.fail("worked-example graph failed the round trip");
    amr::AmrGraph once = amr::simplify_graph(worked);
    if (!amr::structurally_equal(amr::simplify_graph(once), once))
        out.fail("worked-example simplification is not idempotent");

    int failures = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        amr::AmrGraph g = dialeval::testing::random_graph(rng);
        if (!amr::structurally_equal(amr::parse_penman(amr::serialize_penman(g)), g)) ++failures;
        amr::AmrGraph s1 = amr::simplify_graph(g);
        if (!amr::structurally_equal(amr::simplify_graph(s1), s1)) ++failures;
        if (s1.nodes.size() > g.nodes.size() || s1.edges.size() > g.edges.size()) ++failures;
    }
    if (failures > 0) out.fail(std::to_string(failures) + " random-graph failures");

    double elapsed = seconds_since(start);
    if (elapsed >= 5.0) out.fail("took " + std::to_string(elapsed) + "s, limit 5s");
    out.detail += "worked example + 100 random graphs, " + std::to_string(elapsed) + "s";
    return out;
}

// ---- shared toy model helpers ----------------------------------------------
slm::DialoguePair grad_pair(const std::string& id, bool positive) {
    slm::DialoguePair pair;
    pair.id = id;
    pair.context = {"what about the garden"};
    pair.response = positive ? "yes the garden is really worth it"
                             : "anyway the canyon is really worth it";
    pair.context_graph = amr::parse_penman("(worth :ARG1 (garden))");
    pair.response_graph = positive ? amr::parse_penman("(recommend :degree (really))")
                                   : amr::parse_penman("(worth :mod (canyon))");
    pair.has_graphs = true;  // merged graphs hold at most 5 nodes
    return pair;
}

slm::SlmModel grad_model(std::uint64_t seed) {
    slm::SlmConfig config;
    config.width = 8;
    config.seq_layers = 2;
    config.seq_heads = 2;
    config.ff_multiplier = 2;
    config.graph_layers = 2;
    std::vector<std::string> texts;
    slm::ConceptVocab concepts;
    slm::RelationVocab relations;
    for (bool positive : {true, false}) {
        slm::DialoguePair p = grad_pair("x", positive);
        for (const auto& turn : p.context) texts.push_back(turn);
        texts.push_back(p.response);
        amr::AmrGraph merged =
            amr::merge_context_response_graphs(p.context_graph, p.response_graph);
        concepts.add_graph(merged);
        relations.add_graph(merged);
    }
    slm::SlmModel model = slm::SlmModel::init(config, slm::Vocabulary::build(texts), concepts,
                                              relations, seed);
    std::mt19937_64 rng(seed ^ 0x5eed);
    model.gate.wg = nn::uniform(8, 1, -0.5, 0.5, rng);
    model.gate.bg = nn::uniform(1, 1, -0.5, 0.5, rng);
    model.classifier.wf = nn::uniform(8, 2, -0.5, 0.5, rng);
    model.classifier.bf = nn::uniform(1, 2, -0.5, 0.5, rng);
    return model;
}

// ---- 2. gradient suite ------------------------------------------------------
Outcome criterion_gradients() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    const double h = 1e-5, tol = 1e-4;
    double worst = 0.0;

    for (std::uint64_t seed = 0; seed < 50 && out.pass; ++seed) {
        slm::SlmModel model = grad_model(seed);
        std::vector<slm::DialoguePair> pairs = {grad_pair("p", true), grad_pair("n", false)};
        std::vector<int> labels = {1, 0};

        auto loss_value = [&](bool contrastive) {
            nn::Tape tape;
            slm::TapeModel tm = slm::TapeModel::load(tape, model);
            std::vector<nn::Var> probs;
            train::BatchRepresentations reps;
            for (size_t i = 0; i < pairs.size(); ++i) {
                auto fwd = slm::forward_pair(tape, tm, model, pairs[i], {});
                probs.push_back(fwd.probs);
                reps.labels.push_back(labels[i]);
                reps.pooled_seq.push_back(fwd.pooled_seq);
                reps.pooled_graph.push_back(fwd.pooled_graph);
            }
            return contrastive ? train::contrastive_loss(reps, 0.4).scalar()
                               : train::classification_loss(probs, labels).scalar();
        };

        for (bool contrastive : {false, true}) {
            nn::Tape tape;
            slm::TapeModel tm = slm::TapeModel::load(tape, model);
            std::vector<nn::Var> probs;
            train::BatchRepresentations reps;
            for (size_t i = 0; i < pairs.size(); ++i) {
                auto fwd = slm::forward_pair(tape, tm, model, pairs[i], {});
                probs.push_back(fwd.probs);
                reps.labels.push_back(labels[i]);
                reps.pooled_seq.push_back(fwd.pooled_seq);
                reps.pooled_graph.push_back(fwd.pooled_graph);
            }
            nn::Var loss = contrastive ? train::contrastive_loss(reps, 0.4)
                                       : train::classification_loss(probs, reps.labels);
            tape.backward(loss);

            std::vector<std::pair<std::string, nn::Mat*>> checked = {
                {"gate.wg", &model.gate.wg},
                {"gate.bg", &model.gate.bg},
                {"classifier.wf", &model.classifier.wf},
                {"classifier.bf", &model.classifier.bf},
                {"graph.layer0.wr", &model.graph.layers[0].wr},
            };
            for (auto& [name, mat] : checked) {
                nn::Var var;
                for (const auto& [pname, pvar] : tm.named)
                    if (pname == name) var = pvar;
                for (Eigen::Index i = 0; i < mat->rows() && out.pass; ++i) {
                    for (Eigen::Index j = 0; j < mat->cols(); ++j) {
                        double keep = (*mat)(i, j);
                        (*mat)(i, j) = keep + h;
                        double up = loss_value(contrastive);
                        (*mat)(i, j) = keep - h;
                        double down = loss_value(contrastive);
                        (*mat)(i, j) = keep;
                        double fd = (up - down) / (2 * h);
                        double an = tape.grad(var)(i, j);
                        double rel =
                            std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
                        worst = std::max(worst, rel);
                        if (rel > tol) {
                            out.fail(name + " rel err " + std::to_string(rel) + " at seed " +
                                     std::to_string(seed));
                            break;
                        }
                    }
                }
            }
        }
    }

    double elapsed = seconds_since(start);
    if (elapsed >= 30.0) out.fail("took " + std::to_string(elapsed) + "s, limit 30s");
    std::ostringstream d;
    d << "50 seeds, worst rel err " << worst << ", " << elapsed << "s";
    out.detail += d.str();
    return out;
}

// ---- 3. attention normalization and relation sensitivity --------------------
Outcome criterion_attention() {
    Outcome out;
    int norm_checked = 0;

    for (int seed = 0; seed < 100 && out.pass; ++seed) {
        slm::SlmModel model = grad_model(seed + 1000);
        nn::Tape tape;
        slm::TapeModel tm = slm::TapeModel::load(tape, model);
        auto fwd = slm::forward_pair(tape, tm, model, grad_pair("p", seed % 2 == 0), {});
        for (const auto& layer : fwd.seq->attention)
            for (const auto& head : layer)
                for (Eigen::Index i = 0; i < head.rows(); ++i, ++norm_checked)
                    if (std::abs(head.row(i).sum() - 1.0) > 1e-6)
                        out.fail("sequence attention row sum off at seed " +
                                 std::to_string(seed));
        for (const auto& layer : fwd.graph->attention)
            for (Eigen::Index i = 0; i < layer[0].rows(); ++i, ++norm_checked)
                if (std::abs(layer[0].row(i).sum() - 1.0) > 1e-6)
                    out.fail("graph attention row sum off at seed " + std::to_string(seed));
    }

    // relation sensitivity on random graphs with >= 2 distinct edge labels
    int sensitive_cases = 0;
    for (int seed = 0; sensitive_cases < 100 && out.pass; ++seed) {
        std::mt19937_64 rng(seed + 5000);
        amr::AmrGraph g = dialeval::testing::random_graph(rng);
        // pick two effective edges with distinct labels and distinct slots
        auto effective = [&](size_t k) {
            for (size_t e = 0; e < k; ++e)
                if (g.edges[e].source == g.edges[k].source &&
                    g.edges[e].target == g.edges[k].target)
                    return false;
            return true;
        };
        int a = -1, b = -1;
        for (size_t i = 0; i < g.edges.size() && b < 0; ++i) {
            if (!effective(i)) continue;
            for (size_t j = i + 1; j < g.edges.size(); ++j) {
                if (!effective(j)) continue;
                if (g.edges[i].relation != g.edges[j].relation) {
                    a = static_cast<int>(i);
                    b = static_cast<int>(j);
                    break;
                }
            }
        }
        if (a < 0) continue;
        ++sensitive_cases;

        amr::AmrGraph relabeled = g;
        std::swap(relabeled.edges[a].relation, relabeled.edges[b].relation);

        slm::SlmModel model = grad_model(seed + 7000);
        for (const auto& n : g.nodes) model.concepts.add(n.label);
        for (const auto& e : g.edges) model.relations.add(e.relation);
        // vocabularies grew after init; rebuild the embedding tables
        std::mt19937_64 erng(seed + 7001);
        model.graph.concept_embedding = nn::xavier_uniform(model.concepts.size(), 8, erng);
        model.graph.relation_embedding = nn::xavier_uniform(model.relations.size(), 8, erng);

        auto attention_of = [&](const amr::AmrGraph& graph) {
            nn::Tape tape;
            slm::TapeModel tm = slm::TapeModel::load(tape, model);
            return encode_graph(tm, graph, model.concepts, model.relations).attention;
        };

        auto base = attention_of(g);
        auto swapped = attention_of(relabeled);
        double diff = 0;
        for (size_t l = 0; l < base.size(); ++l)
            diff = std::max(diff, (base[l][0] - swapped[l][0]).cwiseAbs().maxCoeff());
        if (diff <= 1e-9)
            out.fail("edge relabel left attention unchanged with nonzero Wr, seed " +
                     std::to_string(seed));

        for (auto& layer : model.graph.layers) layer.wr.setZero();
        auto base0 = attention_of(g);
        auto swapped0 = attention_of(relabeled);
        for (size_t l = 0; l < base0.size(); ++l)
            if ((base0[l][0] - swapped0[l][0]).cwiseAbs().maxCoeff() > 1e-12)
                out.fail("edge relabel changed attention with zero Wr, seed " +
                         std::to_string(seed));
    }

    out.detail += std::to_string(norm_checked) + " rows normalized, " +
                  std::to_string(sensitive_cases) + " relabel cases";
    return out;
}

// ---- 4. loss oracles ---------------------------------------------------------
Outcome criterion_losses() {
    Outcome out;

    double two_case = train::classification_loss_value({0.9, 0.2}, {1, 0});
    double expect = -(std::log(0.9) + std::log(0.8)) / 2.0;
    if (std::abs(two_case - expect) > 1e-9) out.fail("mixed-batch classification loss off");
    if (std::abs(train::classification_loss_value({0.5, 0.5}, {1, 0}) - std::log(2.0)) > 1e-9)
        out.fail("coin-flip classification loss is not ln 2");

    auto unit_at = [](double c) {
        nn::Mat m(1, 2);
        m << c, std::sqrt(std::max(0.0, 1.0 - c * c));
        return m;
    };
    nn::Mat base(1, 2);
    base << 1.0, 0.0;
    double contrastive =
        train::contrastive_loss_value({base, base}, {unit_at(1.0), unit_at(0.0)}, {1, 0}, 1.0);
    double expect_contrastive = -std::log(std::exp(1.0) / (std::exp(1.0) + 1.0));
    if (std::abs(contrastive - expect_contrastive) > 1e-6)
        out.fail("hand-computed contrastive case off: got " + std::to_string(contrastive));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> sim(-0.95, 0.95);
    std::uniform_int_distribution<int> batch_size(3, 8);
    for (int trial = 0; trial < 100 && out.pass; ++trial) {
        int n = batch_size(rng);
        std::vector<nn::Mat> hs, ha;
        std::vector<int> labels;
        std::vector<double> sims;
        for (int i = 0; i < n; ++i) {
            double s = sim(rng);
            sims.push_back(s);
            hs.push_back(base);
            ha.push_back(unit_at(s));
            labels.push_back(i == 0 ? 1 : 0);
        }
        double before = train::contrastive_loss_value(hs, ha, labels, 0.5);
        std::uniform_int_distribution<int> pick(1, n - 1);
        int j = pick(rng);
        std::uniform_real_distribution<double> delta(0.01, sims[j] + 0.999);
        ha[j] = unit_at(sims[j] - delta(rng));
        double after = train::contrastive_loss_value(hs, ha, labels, 0.5);
        if (after >= before)
            out.fail("loss not monotone in a negative similarity, trial " +
                     std::to_string(trial));
    }

    out.detail += "hand cases + 100 monotonicity batches";
    return out;
}

// ---- 5. toy adversarial training -------------------------------------------
Outcome criterion_toy_training() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();

    train::SyntheticDataset data = train::make_synthetic_benchmark({200, 0.2});
    train::AblationBenchmarkResult r = train::run_ablation_benchmark(data, 20);

    if (r.full < 0.95) out.fail("full-model accuracy " + std::to_string(r.full) + " < 0.95");
    if (r.full < r.graph_only) out.fail("full < graph_only");
    if (r.graph_only < r.sequence_only) out.fail("graph_only < sequence_only");
    if (r.full - r.sequence_only < 0.03) out.fail("full - sequence_only margin < 0.03");

    double elapsed = seconds_since(start);
    if (elapsed >= 180.0) out.fail("took " + std::to_string(elapsed) + "s, limit 180s");
    std::ostringstream d;
    d << "full " << r.full << " >= graph " << r.graph_only << " >= seq " << r.sequence_only
      << ", " << elapsed << "s";
    out.detail += d.str();
    return out;
}

// ---- 6. optional full-scale check (not gating) -------------------------------
Outcome criterion_full_scale() {
    Outcome out;
    out.detail =
        "full-scale training needs the DailyDialog++ release; run "
        "`dialeval train-slm` per README to reproduce the ablation ordering";
    return out;  // reported as SKIP below
}

// ---- 7. prompt fidelity -------------------------------------------------------
Outcome criterion_prompts() {
    Outcome out;

    amr::AmrGraph g = amr::parse_penman(read_file(fixture_path(
        "penman/sightseeing_merged.penman")));
    judge::JudgePrompt rendered = judge::build_prompt(
        judge::Criterion::Coherence,
        "Would you recommend some places for sightseeing? How about great canyon? Is it worth "
        "seeing?",
        "The movie was really good, it was worth watching it.", amr::serialize_penman(g), 0.32);
    if (rendered.rendered_text != read_file(fixture_path("prompts/sightseeing_prompt.txt")))
        out.fail("worked-example prompt differs from the golden file");

    for (judge::Criterion c : judge::kAllCriteria) {
        std::string name = lowercase(judge::criterion_name(c));
        std::string golden = read_file(fixture_path("prompts/" + name + "_template.txt"));
        if (judge::prompt_template(c) != golden) {
            out.fail(name + " template differs from the golden file");
            continue;
        }
        judge::JudgePrompt p = judge::build_prompt(c, "ctx", "resp", "(a / alpha)", 0.5);
        auto head_of = [](const std::string& s) { return s.substr(0, s.find("Input:\n")); };
        auto foot_of = [](const std::string& s) {
            return s.substr(s.find("Evaluation Form (Score ONLY):"));
        };
        if (head_of(p.rendered_text) != head_of(golden) ||
            foot_of(p.rendered_text) != foot_of(golden))
            out.fail(name + " rendered prompt differs from its template outside the Input block");
    }

    out.detail += "worked example byte-identical; 4 templates match modulo Input block";
    return out;
}

// ---- 8. statistics oracles ----------------------------------------------------
Outcome criterion_statistics() {
    Outcome out;

    std::mt19937_64 rng(88);
    std::uniform_int_distribution<int> len(3, 40), val(-10, 10);
    double worst = 0;
    for (int trial = 0; trial < 1000 && out.pass; ++trial) {
        int n = len(rng);
        std::vector<double> x(n), y(n);
        bool degenerate = true;
        while (degenerate) {
            for (int i = 0; i < n; ++i) {
                x[i] = val(rng);
                y[i] = val(rng);
            }
            degenerate = std::equal(x.begin() + 1, x.end(), x.begin()) ||
                         std::equal(y.begin() + 1, y.end(), y.begin());
        }
        double dp = std::abs(stats::pearson(x, y).rho - dialeval::testing::reference_pearson(x, y));
        double rs = dialeval::testing::reference_spearman(x, y);
        double ds = std::abs(stats::spearman(x, y).rho - rs);
        worst = std::max({worst, dp, ds});
        if (dp > 1e-12 || ds > 1e-12)
            out.fail("reference mismatch at trial " + std::to_string(trial));
    }

    std::vector<double> sx{1, 2, 3, 4}, sy{1, 3, 2, 4};
    if (stats::spearman(sx, sy).rho != 0.8) out.fail("spearman hand case is not 0.8");
    std::vector<int> ka{1, 1, 0, 0}, kb{1, 0, 0, 0};
    if (stats::cohen_kappa(ka, kb) != 0.5) out.fail("kappa hand case is not exactly 0.5");

    std::vector<eval::CriterionCorrelations> per;
    for (judge::Criterion c : judge::kAllCriteria) {
        eval::CriterionCorrelations cc;
        cc.criterion = c;
        cc.pearson = stats::Correlation{0.37, 0.01};
        cc.spearman = stats::Correlation{0.37, 0.01};
        cc.n = 12;
        per.push_back(cc);
    }
    eval::CorrelationReport agg = eval::aggregate_criteria(per);
    if (std::abs(*agg.avg_pearson_rho - 0.37) > 1e-15 ||
        std::abs(*agg.avg_spearman_rho - 0.37) > 1e-15)
        out.fail("aggregate of four equal criterion values is not that value");

    std::ostringstream d;
    d << "1000 vectors, worst |diff| " << worst;
    out.detail += d.str();
    return out;
}

// ---- 9. end-to-end mock pipeline ----------------------------------------------
int run_cli(const std::string& args, std::string& run_dir) {
    std::string out_file = g_scratch + "/cli_out.txt";
    std::string cmd = g_binary + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(cmd.c_str());
    std::string output = fs::exists(out_file) ? read_file(out_file) : "";
    size_t arrow = output.rfind("-> ");
    if (arrow != std::string::npos) {
        run_dir = trim(output.substr(arrow + 3));
    }
    if (status != 0) std::fprintf(stderr, "%s\n", output.c_str());
    return status;
}

Outcome criterion_end_to_end() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();

    std::string data = g_scratch + "/data";
    fs::create_directories(data);
    for (const char* rel :
         {"datasets/train_small.jsonl", "datasets/eval_pairs.jsonl", "amr/fixture_graphs.jsonl",
          "annotations/eval_annotations.tsv", "judge/replay_transcript.jsonl"})
        fs::copy_file(fixture_path(rel), data + "/" + fs::path(rel).filename().string(),
                      fs::copy_options::overwrite_existing);

    std::string runs = g_scratch + "/runs";
    std::string small_model =
        " --set width=8 --set seq_layers=1 --set seq_heads=2 --set graph_layers=1";
    std::string fixture_flag = " --set amr_fixture=" + data + "/fixture_graphs.jsonl";

    std::string pre_train_dir, train_dir, pre_eval_dir, score_dir, judge_dir, eval_dir;
    if (run_cli("preprocess-amr --out " + runs + fixture_flag + " --set dataset=" + data +
                    "/train_small.jsonl --set dataset_format=augmented_pairs",
                pre_train_dir) != 0)
        out.fail("preprocess-amr (train split) exited non-zero");

    if (out.pass && run_cli("train-slm --out " + runs + small_model +
                                " --set dataset_format=augmented_pairs --set epochs=2 --set "
                                "batch_size=8 --set preprocessed=" +
                                pre_train_dir + "/preprocessed.jsonl",
                            train_dir) != 0)
        out.fail("train-slm exited non-zero");

    if (out.pass && run_cli("preprocess-amr --out " + runs + fixture_flag +
                                " --set dataset=" + data + "/eval_pairs.jsonl",
                            pre_eval_dir) != 0)
        out.fail("preprocess-amr (eval split) exited non-zero");

    if (out.pass && run_cli("score --out " + runs + " --set preprocessed=" + pre_eval_dir +
                                "/preprocessed.jsonl --set checkpoint=" + train_dir +
                                "/checkpoint.bin",
                            score_dir) != 0)
        out.fail("score exited non-zero");

    if (out.pass && run_cli("judge --out " + runs +
                                " --set requests_per_second=1000 --set judge_client=replay --set "
                                "replay_transcript=" +
                                data + "/replay_transcript.jsonl --set n_per_set=6 --set "
                                "preprocessed=" +
                                pre_eval_dir + "/preprocessed.jsonl --set checkpoint=" +
                                train_dir + "/checkpoint.bin",
                            judge_dir) != 0)
        out.fail("judge exited non-zero");

    if (out.pass && run_cli("evaluate --out " + runs + " --set judge_results=" + judge_dir +
                                "/judge_results.json --set annotations=" + data +
                                "/eval_annotations.tsv",
                            eval_dir) != 0)
        out.fail("evaluate exited non-zero");

    if (out.pass) {
        nlohmann::json report = nlohmann::json::parse(read_file(eval_dir + "/report.json"));
        size_t judged_pairs = 0;
        nlohmann::json judged = nlohmann::json::parse(read_file(judge_dir +
                                                                "/judge_results.json"));
        for (const auto& name : {"standard", "adversarial"})
            judged_pairs += judged[name].size();
        if (judged_pairs != 12) out.fail("expected 12 judged pairs");
        if (report["sets"].size() != 2) out.fail("report is missing a set");
        for (const auto& jset : report["sets"]) {
            for (const auto& c : jset["criteria"]) {
                if (c["pearson"].is_null() ||
                    std::abs(c["pearson"]["rho"].get<double>() - 1.0) > 1e-9 ||
                    std::abs(c["spearman"]["rho"].get<double>() - 1.0) > 1e-9)
                    out.fail("a correlation cell is not 1.0 in set " +
                             jset["name"].get<std::string>());
            }
            if (std::abs(jset["average"]["pearson_rho"].get<double>() - 1.0) > 1e-9)
                out.fail("set average is not 1.0");
        }
    }

    double elapsed = seconds_since(start);
    if (elapsed >= 300.0) out.fail("took " + std::to_string(elapsed) + "s, limit 300s");
    std::ostringstream d;
    d << "12 judged pairs, all rho = tau = 1.0, offline, " << elapsed << "s";
    out.detail += d.str();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <fixtures_dir> <dialeval_binary>\n", argv[0]);
        return 2;
    }
    g_fixtures = argv[1];
    g_binary = argv[2];
    g_scratch = (fs::temp_directory_path() / "dialeval_acceptance").string();
    fs::remove_all(g_scratch);
    fs::create_directories(g_scratch);

    struct Criterion {
        std::string name;
        std::function<Outcome()> run;
        bool gating = true;
    };
    std::vector<Criterion> criteria = {
        {"AMR round-trip and simplification idempotence", criterion_amr_round_trip},
        {"gradient suite vs central finite differences", criterion_gradients},
        {"attention normalization and relation sensitivity", criterion_attention},
        {"loss oracles (hand cases + monotonicity)", criterion_losses},
        {"toy adversarial training with ablation ordering", criterion_toy_training},
        {"full-scale ablation ordering (optional)", criterion_full_scale, false},
        {"prompt fidelity against golden files", criterion_prompts},
        {"statistics oracles vs reference implementations", criterion_statistics},
        {"end-to-end mock pipeline via the CLI", criterion_end_to_end},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const char* tag = !criteria[i].gating ? "SKIP" : outcome.pass ? "PASS" : "FAIL";
        if (criteria[i].gating && !outcome.pass) ++failures;
        std::printf("[%s] criterion %zu: %s — %s\n", tag, i + 1, criteria[i].name.c_str(),
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}

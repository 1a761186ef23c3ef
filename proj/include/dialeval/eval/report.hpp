#pragma once

// Correlation report: per-set, per-criterion Pearson/Spearman against the
// averaged human scores, criterion-averaged coefficients, and the pairwise
// kappa summary. Emitted both machine-readable (JSON) and as aligned text.
// Output is a pure function of its inputs, so regeneration is byte-identical.

#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "dialeval/eval/annotations.hpp"
#include "dialeval/eval/eval_set.hpp"
#include "dialeval/judge/judge.hpp"
#include "dialeval/stats/correlation.hpp"

namespace dialeval::eval {

struct CriterionCorrelations {
    judge::Criterion criterion = judge::Criterion::Naturalness;
    std::optional<stats::Correlation> pearson;  // empty when degenerate
    std::optional<stats::Correlation> spearman;
    size_t n = 0;
};

struct CorrelationReport {
    std::vector<CriterionCorrelations> per_criterion;
    std::optional<double> avg_pearson_rho;
    std::optional<double> avg_spearman_rho;
    size_t sample_size = 0;
};

// Averages the four criterion coefficients; per-criterion entries stay.
inline CorrelationReport aggregate_criteria(std::vector<CriterionCorrelations> per_criterion) {
    if (per_criterion.size() != judge::kAllCriteria.size())
        throw DegenerateInput("aggregation expects exactly four criterion reports");
    for (const auto& c : per_criterion)
        if (c.n != per_criterion[0].n)
            throw DegenerateInput("criterion reports disagree on sample size");

    CorrelationReport report;
    report.sample_size = per_criterion[0].n;
    double sum_p = 0, sum_s = 0;
    bool all_defined = true;
    for (const auto& c : per_criterion) {
        if (c.pearson && c.spearman) {
            sum_p += c.pearson->rho;
            sum_s += c.spearman->rho;
        } else {
            all_defined = false;
        }
    }
    if (all_defined) {
        report.avg_pearson_rho = sum_p / per_criterion.size();
        report.avg_spearman_rho = sum_s / per_criterion.size();
    }
    report.per_criterion = std::move(per_criterion);
    return report;
}

struct EvalSetScores {
    std::string set_name;  // "standard" / "adversarial"
    std::vector<judge::JudgeResult> results;
};

struct ReportBundle {
    nlohmann::json machine;
    std::string text;
};

namespace report_detail {

inline CorrelationReport set_report(const EvalSetScores& set, const AnnotationSet& annotations,
                                    std::vector<std::string>& missing) {
    std::vector<CriterionCorrelations> per_criterion;
    for (judge::Criterion c : judge::kAllCriteria) {
        std::vector<double> judged, human;
        for (const auto& result : set.results) {
            if (!annotations.has_pair(result.pair_id)) {
                missing.push_back(result.pair_id);
                continue;
            }
            const auto& outcome = result.outcome(c);
            if (!outcome.succeeded || !annotations.has(result.pair_id, c)) continue;
            judged.push_back(outcome.score);
            human.push_back(annotations.averaged(result.pair_id, c));
        }
        CriterionCorrelations cc;
        cc.criterion = c;
        cc.n = judged.size();
        try {
            cc.pearson = stats::pearson(judged, human);
            cc.spearman = stats::spearman(judged, human);
        } catch (const DegenerateInput&) {
            cc.pearson.reset();
            cc.spearman.reset();
        }
        per_criterion.push_back(std::move(cc));
    }
    // missing pairs repeat per criterion; dedupe
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    return aggregate_criteria(std::move(per_criterion));
}

inline nlohmann::json correlation_json(const std::optional<stats::Correlation>& c) {
    if (!c) return nullptr;
    return {{"rho", c->rho}, {"p", c->p}};
}

inline std::string cell(const std::optional<stats::Correlation>& c) {
    if (!c) return "n/a";
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << c->rho << " (" << std::setprecision(4) << c->p
        << ")";
    return out.str();
}

}  // namespace report_detail

inline ReportBundle generate_report(const std::vector<EvalSetScores>& sets,
                                    const AnnotationSet& annotations,
                                    const std::string& config_hash) {
    std::vector<std::string> missing;
    std::vector<std::pair<std::string, CorrelationReport>> reports;
    for (const auto& set : sets)
        reports.emplace_back(set.set_name, report_detail::set_report(set, annotations, missing));
    if (!missing.empty())
        throw MissingAnnotations("pairs lack annotations: " + std::to_string(missing.size()),
                                 missing);

    nlohmann::json machine;
    machine["config_hash"] = config_hash;
    machine["sets"] = nlohmann::json::array();

    std::ostringstream text;
    text << "correlations with human judgments (config " << config_hash << ")\n";
    text << std::left << std::setw(14) << "set" << std::setw(16) << "criterion" << std::setw(22)
         << "pearson rho (p)" << std::setw(22) << "spearman tau (p)" << "n\n";

    for (const auto& [name, report] : reports) {
        nlohmann::json jset;
        jset["name"] = name;
        jset["sample_size"] = report.sample_size;
        jset["criteria"] = nlohmann::json::array();
        for (const auto& c : report.per_criterion) {
            jset["criteria"].push_back({{"criterion", judge::criterion_name(c.criterion)},
                                        {"pearson", report_detail::correlation_json(c.pearson)},
                                        {"spearman", report_detail::correlation_json(c.spearman)},
                                        {"n", c.n}});
            text << std::left << std::setw(14) << name << std::setw(16)
                 << judge::criterion_name(c.criterion) << std::setw(22)
                 << report_detail::cell(c.pearson) << std::setw(22)
                 << report_detail::cell(c.spearman) << c.n << "\n";
        }
        if (report.avg_pearson_rho) {
            jset["average"] = {{"pearson_rho", *report.avg_pearson_rho},
                               {"spearman_tau", *report.avg_spearman_rho}};
            std::ostringstream avg_p, avg_s;
            avg_p << std::fixed << std::setprecision(4) << *report.avg_pearson_rho;
            avg_s << std::fixed << std::setprecision(4) << *report.avg_spearman_rho;
            text << std::left << std::setw(14) << name << std::setw(16) << "average"
                 << std::setw(22) << avg_p.str() << std::setw(22) << avg_s.str()
                 << report.sample_size << "\n";
        } else {
            jset["average"] = nullptr;
            text << std::left << std::setw(14) << name << std::setw(16) << "average"
                 << std::setw(22) << "n/a" << std::setw(22) << "n/a" << report.sample_size
                 << "\n";
        }
        machine["sets"].push_back(jset);
    }

    stats::KappaReport kappa = annotations.kappa_report();
    nlohmann::json jkappa;
    jkappa["pairwise"] = nlohmann::json::array();
    text << "\ninter-annotator agreement (Cohen's kappa)\n";
    for (const auto& pk : kappa.pairwise) {
        jkappa["pairwise"].push_back(
            {{"a", pk.annotator_a}, {"b", pk.annotator_b}, {"kappa", pk.kappa}});
        text << pk.annotator_a << " vs " << pk.annotator_b << ": " << std::fixed
             << std::setprecision(4) << pk.kappa << "\n";
    }
    jkappa["mean"] = kappa.mean_kappa;
    machine["kappa"] = jkappa;
    text << "mean kappa: " << std::fixed << std::setprecision(4) << kappa.mean_kappa << "\n";

    return {std::move(machine), text.str()};
}

}  // namespace dialeval::eval

#pragma once

// Human annotations: per-annotator, per-criterion 5-point scores, stored as
// line-delimited "pair_id <TAB> annotator <TAB> criterion <TAB> score"
// records. Scores are averaged over annotators for correlations; the raw
// per-annotator scores feed the pairwise kappa computation.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dialeval/judge/criteria.hpp"
#include "dialeval/stats/kappa.hpp"

namespace dialeval::eval {

class AnnotationSet {
   public:
    void add(const std::string& pair_id, const std::string& annotator, judge::Criterion criterion,
             int score) {
        if (score < 1 || score > 5)
            throw FormatError("annotation score outside the 5-point scale: " +
                              std::to_string(score));
        cells_[pair_id][static_cast<int>(criterion)][annotator] = score;
        annotators_.insert(annotator);
    }

    bool has_pair(const std::string& pair_id) const { return cells_.count(pair_id) > 0; }

    bool has(const std::string& pair_id, judge::Criterion criterion) const {
        auto it = cells_.find(pair_id);
        return it != cells_.end() && it->second.count(static_cast<int>(criterion)) > 0;
    }

    // Mean over annotators; stays within [1,5].
    double averaged(const std::string& pair_id, judge::Criterion criterion) const {
        const auto& by_annotator = cells_.at(pair_id).at(static_cast<int>(criterion));
        double sum = 0;
        for (const auto& [annotator, score] : by_annotator) sum += score;
        return sum / static_cast<double>(by_annotator.size());
    }

    std::vector<std::string> annotators() const {
        return {annotators_.begin(), annotators_.end()};
    }

    size_t pair_count() const { return cells_.size(); }

    // Categorical vectors over every cell both annotators rated.
    std::pair<std::vector<int>, std::vector<int>> aligned_ratings(
        const std::string& a, const std::string& b) const {
        std::vector<int> ra, rb;
        for (const auto& [pair_id, by_criterion] : cells_) {
            for (const auto& [criterion, by_annotator] : by_criterion) {
                auto ia = by_annotator.find(a);
                auto ib = by_annotator.find(b);
                if (ia != by_annotator.end() && ib != by_annotator.end()) {
                    ra.push_back(ia->second);
                    rb.push_back(ib->second);
                }
            }
        }
        return {std::move(ra), std::move(rb)};
    }

    stats::KappaReport kappa_report() const {
        stats::KappaReport report;
        auto names = annotators();
        double sum = 0;
        for (size_t i = 0; i < names.size(); ++i) {
            for (size_t j = i + 1; j < names.size(); ++j) {
                auto [ra, rb] = aligned_ratings(names[i], names[j]);
                double k = stats::cohen_kappa(ra, rb);
                report.pairwise.push_back({names[i], names[j], k});
                sum += k;
            }
        }
        if (!report.pairwise.empty()) report.mean_kappa = sum / report.pairwise.size();
        return report;
    }

    static AnnotationSet parse_tsv(const std::string& text) {
        AnnotationSet set;
        int line_no = 0;
        for (const auto& line : split_lines(text)) {
            ++line_no;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            std::istringstream ss(t);
            std::string pair_id, annotator, criterion, score;
            if (!std::getline(ss, pair_id, '\t') || !std::getline(ss, annotator, '\t') ||
                !std::getline(ss, criterion, '\t') || !std::getline(ss, score, '\t'))
                throw FormatError("annotation line " + std::to_string(line_no) +
                                  " needs pair_id, annotator, criterion, score");
            try {
                set.add(pair_id, annotator, judge::criterion_from_name(criterion),
                        std::stoi(score));
            } catch (const std::exception& e) {
                throw FormatError("annotation line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return set;
    }

    std::string to_tsv() const {
        std::ostringstream out;
        for (const auto& [pair_id, by_criterion] : cells_)
            for (const auto& [criterion, by_annotator] : by_criterion)
                for (const auto& [annotator, score] : by_annotator)
                    out << pair_id << '\t' << annotator << '\t'
                        << judge::criterion_name(static_cast<judge::Criterion>(criterion)) << '\t'
                        << score << '\n';
        return out.str();
    }

   private:
    // pair -> criterion -> annotator -> score
    std::map<std::string, std::map<int, std::map<std::string, int>>> cells_;
    std::set<std::string> annotators_;
};

}  // namespace dialeval::eval

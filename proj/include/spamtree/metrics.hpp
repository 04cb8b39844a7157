#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spamtree {

// Counts are from the spam perspective: tp = spam called spam, fp = ham
// called spam, tn = ham called ham, fn = spam called ham.
struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

// Throws ModelError when the vectors differ in length, are empty, or hold
// labels outside {0, 1}.
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual);

// Per-class precision and recall; class_id 1 is spam, 0 is ham. For class 1:
// precision = tp/(tp+fp), recall = tp/(tp+fn); for class 0 the mirrored
// tn/(tn+fn) and tn/(tn+fp). nullopt marks an undefined value (denominator
// zero) — callers must not see 0 or NaN stand in for it.
std::optional<double> precision(const ConfusionMatrix& cm, int class_id);
std::optional<double> recall(const ConfusionMatrix& cm, int class_id);

// Harmonic mean 2pr/(p+r); nullopt when p, r are both zero. Inputs must lie
// in [0, 1].
std::optional<double> f_measure(double precision, double recall);

// One table row. rate_true / rate_false are the class's own rate columns:
// TP rate and FP rate for the spam table, TN rate and FN rate for ham.
struct MetricsRow {
    std::string model;
    std::optional<double> rate_true;
    std::optional<double> rate_false;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f_measure;
};

struct MetricsTable {
    int class_id = 1;
    std::vector<MetricsRow> rows;
};

// Builds the (spam table, ham table) pair with rows j48, adtree, ladtree,
// naive_bayes, voting; the voting row majority-combines the three tree
// prediction vectors. All vectors must align with truth.
std::pair<MetricsTable, MetricsTable> evaluate_all(std::span<const int> j48,
                                                   std::span<const int> adtree,
                                                   std::span<const int> ladtree,
                                                   std::span<const int> naive_bayes,
                                                   std::span<const int> truth);

// Aligned text in the familiar two-table layout; values rounded half-up to
// three decimals, undefined cells printed as "-".
std::string render_tables_text(const MetricsTable& spam, const MetricsTable& ham);
std::string tables_to_json(const MetricsTable& spam, const MetricsTable& ham);
// "model,class,rate_true,rate_false,precision,recall,f_measure" rows.
std::string tables_to_csv(const MetricsTable& spam, const MetricsTable& ham);

}  // namespace spamtree

#include "spamtree/metrics.hpp"

#include <array>
#include <cstdio>
#include <sstream>

#include "spamtree/dataset.hpp"
#include "spamtree/inference.hpp"
#include "spamtree/numformat.hpp"

#include "json.hpp"

namespace spamtree {

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size())
        throw ModelError("prediction and truth vectors differ in length (" +
                         std::to_string(predicted.size()) + " vs " +
                         std::to_string(actual.size()) + ")");
    if (predicted.empty()) throw ModelError("cannot score an empty prediction vector");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        int p = predicted[i], a = actual[i];
        if ((p != 0 && p != 1) || (a != 0 && a != 1))
            throw ModelError("labels must be 0 or 1");
        if (a == 1)
            (p == 1 ? cm.tp : cm.fn)++;
        else
            (p == 1 ? cm.fp : cm.tn)++;
    }
    return cm;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return double(num) / den;
}

}  // namespace

std::optional<double> precision(const ConfusionMatrix& cm, int class_id) {
    if (class_id != 0 && class_id != 1) throw ModelError("class id must be 0 or 1");
    return class_id == 1 ? ratio(cm.tp, cm.tp + cm.fp) : ratio(cm.tn, cm.tn + cm.fn);
}

std::optional<double> recall(const ConfusionMatrix& cm, int class_id) {
    if (class_id != 0 && class_id != 1) throw ModelError("class id must be 0 or 1");
    return class_id == 1 ? ratio(cm.tp, cm.tp + cm.fn) : ratio(cm.tn, cm.tn + cm.fp);
}

std::optional<double> f_measure(double precision, double recall) {
    if (precision < 0 || precision > 1 || recall < 0 || recall > 1)
        throw ModelError("precision and recall must lie in [0, 1]");
    if (precision + recall == 0) return std::nullopt;
    return 2 * precision * recall / (precision + recall);
}

namespace {

MetricsRow make_row(const std::string& model, const ConfusionMatrix& cm, int class_id) {
    MetricsRow row;
    row.model = model;
    row.precision = precision(cm, class_id);
    row.recall = recall(cm, class_id);
    // the class's own true rate is its recall; its false rate is the share of
    // the other class pulled in (spam table: FP rate, ham table: FN rate)
    row.rate_true = row.recall;
    row.rate_false = class_id == 1 ? ratio(cm.fp, cm.fp + cm.tn) : ratio(cm.fn, cm.fn + cm.tp);
    if (row.precision && row.recall) row.f_measure = f_measure(*row.precision, *row.recall);
    return row;
}

}  // namespace

std::pair<MetricsTable, MetricsTable> evaluate_all(std::span<const int> j48,
                                                   std::span<const int> adtree,
                                                   std::span<const int> ladtree,
                                                   std::span<const int> naive_bayes,
                                                   std::span<const int> truth) {
    std::vector<int> voting(truth.size());
    if (j48.size() != truth.size() || adtree.size() != truth.size() ||
        ladtree.size() != truth.size() || naive_bayes.size() != truth.size())
        throw ModelError("prediction vectors must align with the truth vector");
    for (std::size_t i = 0; i < truth.size(); ++i)
        voting[i] = vote(std::array<int, 3>{j48[i], adtree[i], ladtree[i]});

    const std::pair<const char*, std::span<const int>> models[] = {
        {"j48", j48},
        {"adtree", adtree},
        {"ladtree", ladtree},
        {"naive_bayes", naive_bayes},
        {"voting", voting},
    };
    MetricsTable spam{1, {}}, ham{0, {}};
    for (const auto& [name, preds] : models) {
        ConfusionMatrix cm = confusion(preds, truth);
        spam.rows.push_back(make_row(name, cm, 1));
        ham.rows.push_back(make_row(name, cm, 0));
    }
    return {std::move(spam), std::move(ham)};
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_fixed(*v, 3) : "-";
}

void render_table(std::ostringstream& out, const MetricsTable& table) {
    const char* rate_true = table.class_id == 1 ? "TP Rate" : "TN Rate";
    const char* rate_false = table.class_id == 1 ? "FP Rate" : "FN Rate";
    out << "Class " << table.class_id << (table.class_id == 1 ? " (spam)" : " (ham)") << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %9s %9s %11s %9s %11s\n", "Model", rate_true,
                  rate_false, "Precision", "Recall", "F-Measure");
    out << line;
    for (const MetricsRow& row : table.rows) {
        std::snprintf(line, sizeof line, "%-14s %9s %9s %11s %9s %11s\n", row.model.c_str(),
                      cell(row.rate_true).c_str(), cell(row.rate_false).c_str(),
                      cell(row.precision).c_str(), cell(row.recall).c_str(),
                      cell(row.f_measure).c_str());
        out << line;
    }
}

nlohmann::json row_json(const MetricsRow& row, int class_id) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["model"] = row.model;
    j[class_id == 1 ? "tp_rate" : "tn_rate"] = opt(row.rate_true);
    j[class_id == 1 ? "fp_rate" : "fn_rate"] = opt(row.rate_false);
    j["precision"] = opt(row.precision);
    j["recall"] = opt(row.recall);
    j["f_measure"] = opt(row.f_measure);
    return j;
}

}  // namespace

std::string render_tables_text(const MetricsTable& spam, const MetricsTable& ham) {
    std::ostringstream out;
    render_table(out, spam);
    out << '\n';
    render_table(out, ham);
    return out.str();
}

std::string tables_to_json(const MetricsTable& spam, const MetricsTable& ham) {
    nlohmann::json j;
    j["class_1"] = nlohmann::json::array();
    for (const MetricsRow& row : spam.rows) j["class_1"].push_back(row_json(row, 1));
    j["class_0"] = nlohmann::json::array();
    for (const MetricsRow& row : ham.rows) j["class_0"].push_back(row_json(row, 0));
    return j.dump(2);
}

std::string tables_to_csv(const MetricsTable& spam, const MetricsTable& ham) {
    std::ostringstream out;
    out << "model,class,rate_true,rate_false,precision,recall,f_measure\n";
    auto raw = [](const std::optional<double>& v) {
        return v ? shortest_decimal(*v) : std::string();
    };
    for (const MetricsTable* table : {&spam, &ham})
        for (const MetricsRow& row : table->rows)
            out << row.model << ',' << table->class_id << ',' << raw(row.rate_true) << ','
                << raw(row.rate_false) << ',' << raw(row.precision) << ',' << raw(row.recall)
                << ',' << raw(row.f_measure) << '\n';
    return out.str();
}

}  // namespace spamtree

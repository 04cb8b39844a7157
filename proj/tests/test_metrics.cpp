#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "spamtree/dataset.hpp"
#include "spamtree/metrics.hpp"
#include "spamtree/numformat.hpp"
#include "spamtree/split.hpp"

using namespace spamtree;

namespace {

// expands a confusion matrix back into aligned prediction/truth vectors
void expand(const ConfusionMatrix& cm, std::vector<int>& pred, std::vector<int>& truth) {
    pred.clear();
    truth.clear();
    for (std::size_t i = 0; i < cm.tp; ++i) pred.push_back(1), truth.push_back(1);
    for (std::size_t i = 0; i < cm.fn; ++i) pred.push_back(0), truth.push_back(1);
    for (std::size_t i = 0; i < cm.fp; ++i) pred.push_back(1), truth.push_back(0);
    for (std::size_t i = 0; i < cm.tn; ++i) pred.push_back(0), truth.push_back(0);
}

bool same_opt(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || *a == *b;
}

}  // namespace

TEST_CASE("confusion: counts and input validation") {
    std::vector<int> pred = {1, 1, 0, 0, 1, 0};
    std::vector<int> truth = {1, 0, 1, 0, 1, 0};
    ConfusionMatrix cm = confusion(pred, truth);
    CHECK(cm.tp == 2);
    CHECK(cm.fp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.tn == 2);
    CHECK(cm.total() == 6);

    CHECK_THROWS_AS(confusion(std::vector<int>{1}, std::vector<int>{1, 0}), ModelError);
    CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}), ModelError);
    CHECK_THROWS_AS(confusion(std::vector<int>{2}, std::vector<int>{1}), ModelError);
    CHECK_THROWS_AS(confusion(std::vector<int>{0}, std::vector<int>{-1}), ModelError);
}

TEST_CASE("precision/recall: hand values for both classes") {
    ConfusionMatrix cm{9, 1, 8, 2};  // tp fp tn fn
    CHECK(*precision(cm, 1) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(*recall(cm, 1) == doctest::Approx(9.0 / 11).epsilon(1e-15));
    CHECK(*precision(cm, 0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(*recall(cm, 0) == doctest::Approx(8.0 / 9).epsilon(1e-15));
    CHECK_THROWS_AS(precision(cm, 2), ModelError);
    CHECK_THROWS_AS(recall(cm, -1), ModelError);
}

TEST_CASE("precision/recall: zero denominators are undefined, not zero") {
    // nothing ever called spam
    ConfusionMatrix never_spam{0, 0, 8, 2};
    CHECK(!precision(never_spam, 1).has_value());
    CHECK(recall(never_spam, 1).has_value());  // spam exists in truth, recall 0
    CHECK(*recall(never_spam, 1) == 0.0);
    CHECK(*recall(never_spam, 0) == 1.0);

    // everything called spam
    ConfusionMatrix always_spam{2, 8, 0, 0};
    CHECK(!precision(always_spam, 0).has_value());
    CHECK(*recall(always_spam, 0) == 0.0);

    // no spam in the truth at all
    ConfusionMatrix no_spam_truth{0, 3, 5, 0};
    CHECK(!recall(no_spam_truth, 1).has_value());
    CHECK(precision(no_spam_truth, 0).has_value());
}

TEST_CASE("f_measure: harmonic mean with the edge cases pinned") {
    CHECK(*f_measure(1.0, 1.0) == 1.0);
    CHECK(!f_measure(0.0, 0.0).has_value());
    CHECK(*f_measure(1.0, 0.5) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    for (double p : {0.1, 0.5, 0.93}) CHECK(*f_measure(p, p) == doctest::Approx(p).epsilon(1e-15));
    CHECK(*f_measure(0.3, 0.9) == doctest::Approx(*f_measure(0.9, 0.3)).epsilon(1e-15));
    CHECK(*f_measure(0.9, 0.8) < *f_measure(0.9, 0.9));
    CHECK_THROWS_AS(f_measure(-0.1, 0.5), ModelError);
    CHECK_THROWS_AS(f_measure(0.5, 1.2), ModelError);
}

TEST_CASE("f_measure: three-decimal rounding of known precision/recall pairs") {
    // half-up at the third decimal
    CHECK(round_half_up(*f_measure(0.959, 0.757), 3) == 0.846);
    CHECK(round_half_up(*f_measure(0.937, 0.93), 3) == 0.933);
    CHECK(round_half_up(2.0 / 3, 3) == 0.667);
    CHECK(round_half_up(1.0 / 3, 3) == 0.333);
    CHECK(round_half_up(0.75, 1) == 0.8);  // exact binary half rounds up
}

TEST_CASE("evaluate_all: one hand-worked model row") {
    std::vector<int> truth = {1, 1, 1, 0, 0};
    std::vector<int> pred = {1, 1, 0, 0, 0};  // tp2 fn1 tn2 fp0
    auto [spam, ham] = evaluate_all(pred, pred, pred, pred, truth);

    REQUIRE(spam.rows.size() == 5);
    REQUIRE(ham.rows.size() == 5);
    CHECK(spam.class_id == 1);
    CHECK(ham.class_id == 0);
    CHECK(spam.rows[0].model == "j48");
    CHECK(spam.rows[1].model == "adtree");
    CHECK(spam.rows[2].model == "ladtree");
    CHECK(spam.rows[3].model == "naive_bayes");
    CHECK(spam.rows[4].model == "voting");

    const MetricsRow& s = spam.rows[0];
    CHECK(*s.rate_true == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(*s.rate_false == 0.0);
    CHECK(*s.precision == 1.0);
    CHECK(*s.recall == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(*s.f_measure == doctest::Approx(0.8).epsilon(1e-15));

    const MetricsRow& h = ham.rows[0];
    CHECK(*h.rate_true == 1.0);
    CHECK(*h.rate_false == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(*h.precision == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(*h.recall == 1.0);
    CHECK(*h.f_measure == doctest::Approx(0.8).epsilon(1e-15));

    // identical inputs, identical rows
    for (int m = 1; m < 5; ++m) {
        CHECK(same_opt(spam.rows[m].f_measure, s.f_measure));
        CHECK(same_opt(ham.rows[m].precision, h.precision));
    }

    CHECK_THROWS_AS(evaluate_all(pred, pred, pred, std::vector<int>{1, 0}, truth), ModelError);
}

TEST_CASE("evaluate_all: the voting row really is the majority") {
    std::vector<int> truth = {1, 1, 0, 0};
    std::vector<int> j48 = {1, 0, 0, 1};
    std::vector<int> adt = {1, 1, 0, 0};
    std::vector<int> lad = {0, 1, 1, 0};
    std::vector<int> nb = {0, 0, 0, 0};
    auto [spam, ham] = evaluate_all(j48, adt, lad, nb, truth);
    // majorities: 1,1,0,0 -> perfect agreement with truth
    const MetricsRow& v = spam.rows[4];
    CHECK(*v.precision == 1.0);
    CHECK(*v.recall == 1.0);
    CHECK(*v.f_measure == 1.0);
    CHECK(*ham.rows[4].f_measure == 1.0);
    // while e.g. j48 alone is half wrong
    CHECK(*spam.rows[0].recall == 0.5);
}

TEST_CASE("evaluate_all: degenerate constant predictor keeps undefined cells") {
    std::vector<int> truth = {1, 1, 1, 0, 0};
    std::vector<int> all_spam = {1, 1, 1, 1, 1};
    auto [spam, ham] = evaluate_all(all_spam, all_spam, all_spam, all_spam, truth);
    const MetricsRow& h = ham.rows[0];
    CHECK(!h.precision.has_value());  // tn + fn is zero
    CHECK(!h.f_measure.has_value());
    CHECK(*h.rate_true == 0.0);
    CHECK(*h.rate_false == 0.0);
    const MetricsRow& s = spam.rows[0];
    CHECK(*s.precision == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(*s.recall == 1.0);
    CHECK(*s.rate_false == 1.0);
}

TEST_CASE("evaluate_all: relabeling swaps the two tables") {
    SplitMix64 rng(321);
    for (int round = 0; round < 20; ++round) {
        std::size_t n = 10 + rng.below(30);
        std::vector<int> truth, a, b, c, d;
        for (std::size_t i = 0; i < n; ++i) {
            truth.push_back(int(rng.below(2)));
            a.push_back(int(rng.below(2)));
            b.push_back(int(rng.below(2)));
            c.push_back(int(rng.below(2)));
            d.push_back(int(rng.below(2)));
        }
        // both classes must appear for every denominator to exist
        truth[0] = 0;
        truth[1] = 1;

        auto flip = [](std::vector<int> v) {
            for (int& x : v) x = 1 - x;
            return v;
        };
        auto [spam, ham] = evaluate_all(a, b, c, d, truth);
        auto [spam_f, ham_f] =
            evaluate_all(flip(a), flip(b), flip(c), flip(d), flip(truth));

        for (std::size_t m = 0; m < 5; ++m) {
            CHECK(same_opt(spam_f.rows[m].rate_true, ham.rows[m].rate_true));
            CHECK(same_opt(spam_f.rows[m].rate_false, ham.rows[m].rate_false));
            CHECK(same_opt(spam_f.rows[m].precision, ham.rows[m].precision));
            CHECK(same_opt(spam_f.rows[m].recall, ham.rows[m].recall));
            CHECK(same_opt(spam_f.rows[m].f_measure, ham.rows[m].f_measure));
            CHECK(same_opt(ham_f.rows[m].precision, spam.rows[m].precision));
        }
    }
}

TEST_CASE("evaluate_all: row values equal ratios recomputed from raw counts") {
    SplitMix64 rng(654);
    for (int round = 0; round < 50; ++round) {
        ConfusionMatrix cm{rng.below(20), rng.below(20), rng.below(20), rng.below(20)};
        if (cm.total() == 0) continue;
        std::vector<int> pred, truth;
        expand(cm, pred, truth);
        auto [spam, ham] = evaluate_all(pred, pred, pred, pred, truth);

        auto r = [](std::size_t num, std::size_t den) -> std::optional<double> {
            if (den == 0) return std::nullopt;
            return double(num) / den;
        };
        CHECK(same_opt(spam.rows[0].precision, r(cm.tp, cm.tp + cm.fp)));
        CHECK(same_opt(spam.rows[0].recall, r(cm.tp, cm.tp + cm.fn)));
        CHECK(same_opt(spam.rows[0].rate_false, r(cm.fp, cm.fp + cm.tn)));
        CHECK(same_opt(ham.rows[0].precision, r(cm.tn, cm.tn + cm.fn)));
        CHECK(same_opt(ham.rows[0].recall, r(cm.tn, cm.tn + cm.fp)));
        CHECK(same_opt(ham.rows[0].rate_false, r(cm.fn, cm.fn + cm.tp)));
        if (spam.rows[0].precision && spam.rows[0].recall) {
            double p = *spam.rows[0].precision, rr = *spam.rows[0].recall;
            if (p + rr > 0)
                CHECK(*spam.rows[0].f_measure ==
                      doctest::Approx(2 * p * rr / (p + rr)).epsilon(1e-15));
            else
                CHECK(!spam.rows[0].f_measure.has_value());
        }
    }
}

TEST_CASE("render_tables_text: exact layout, dashes for undefined") {
    std::vector<int> truth = {1, 1, 1, 0, 0};
    std::vector<int> pred = {1, 1, 0, 0, 0};
    auto [spam, ham] = evaluate_all(pred, pred, pred, pred, truth);
    std::string text = render_tables_text(spam, ham);

    std::string spam_block = text.substr(0, text.find("\n\n") + 1);
    CHECK(spam_block ==
          "Class 1 (spam)\n"
          "Model            TP Rate   FP Rate   Precision    Recall   F-Measure\n"
          "j48                0.667     0.000       1.000     0.667       0.800\n"
          "adtree             0.667     0.000       1.000     0.667       0.800\n"
          "ladtree            0.667     0.000       1.000     0.667       0.800\n"
          "naive_bayes        0.667     0.000       1.000     0.667       0.800\n"
          "voting             0.667     0.000       1.000     0.667       0.800\n");

    std::string ham_block = text.substr(text.find("\n\n") + 2);
    CHECK(ham_block ==
          "Class 0 (ham)\n"
          "Model            TN Rate   FN Rate   Precision    Recall   F-Measure\n"
          "j48                1.000     0.333       0.667     1.000       0.800\n"
          "adtree             1.000     0.333       0.667     1.000       0.800\n"
          "ladtree            1.000     0.333       0.667     1.000       0.800\n"
          "naive_bayes        1.000     0.333       0.667     1.000       0.800\n"
          "voting             1.000     0.333       0.667     1.000       0.800\n");

    std::vector<int> all_spam = {1, 1, 1, 1, 1};
    auto [s2, h2] = evaluate_all(all_spam, all_spam, all_spam, all_spam, truth);
    std::string t2 = render_tables_text(s2, h2);
    CHECK(t2.find("j48                0.000     0.000           -     0.000           -\n") !=
          std::string::npos);
}

TEST_CASE("tables_to_json: numbers and nulls land in the right keys") {
    std::vector<int> truth = {1, 1, 1, 0, 0};
    std::vector<int> pred = {1, 1, 0, 0, 0};
    auto [spam, ham] = evaluate_all(pred, pred, pred, pred, truth);
    auto j = nlohmann::json::parse(tables_to_json(spam, ham));

    REQUIRE(j["class_1"].size() == 5);
    REQUIRE(j["class_0"].size() == 5);
    CHECK(j["class_1"][0]["model"] == "j48");
    CHECK(j["class_1"][0]["tp_rate"].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(j["class_1"][0]["fp_rate"].get<double>() == 0.0);
    CHECK(j["class_1"][0]["precision"].get<double>() == 1.0);
    CHECK(j["class_0"][0]["tn_rate"].get<double>() == 1.0);
    CHECK(j["class_0"][0]["fn_rate"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(!j["class_1"][0].contains("tn_rate"));

    std::vector<int> all_spam = {1, 1, 1, 1, 1};
    auto [s2, h2] = evaluate_all(all_spam, all_spam, all_spam, all_spam, truth);
    auto j2 = nlohmann::json::parse(tables_to_json(s2, h2));
    CHECK(j2["class_0"][0]["precision"].is_null());
    CHECK(j2["class_0"][0]["f_measure"].is_null());
    CHECK(j2["class_0"][0]["tn_rate"].get<double>() == 0.0);
}

TEST_CASE("tables_to_csv: raw full-precision values, empty for undefined") {
    std::vector<int> truth = {1, 1, 1, 0, 0};
    std::vector<int> pred = {1, 1, 0, 0, 0};
    auto [spam, ham] = evaluate_all(pred, pred, pred, pred, truth);
    std::string csv = tables_to_csv(spam, ham);

    CHECK(csv.rfind("model,class,rate_true,rate_false,precision,recall,f_measure\n", 0) == 0);
    CHECK(csv.find("j48,1,0.6666666666666666,0,1,0.6666666666666666,0.8\n") !=
          std::string::npos);
    CHECK(csv.find("voting,0,1,0.3333333333333333,0.6666666666666666,1,0.8\n") !=
          std::string::npos);
    // 1 header + 10 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

    std::vector<int> all_spam = {1, 1, 1, 1, 1};
    auto [s2, h2] = evaluate_all(all_spam, all_spam, all_spam, all_spam, truth);
    CHECK(tables_to_csv(s2, h2).find("j48,0,0,0,,0,\n") != std::string::npos);
}

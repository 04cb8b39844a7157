#include <cmath>
#include <vector>

#include "doctest.h"
#include "spamtree/naive_bayes.hpp"
#include "spamtree/split.hpp"

using namespace spamtree;

namespace {

Dataset make_ds(std::vector<std::vector<double>> rows, std::vector<int> labels) {
    Dataset ds;
    ds.relation = "fixture";
    for (std::size_t a = 0; a < rows.at(0).size(); ++a)
        ds.schema.push_back({"a" + std::to_string(a), AttributeKind::numeric, {}});
    ds.schema.push_back({"class", AttributeKind::nominal, {"0", "1"}});
    for (std::size_t i = 0; i < rows.size(); ++i) ds.instances.push_back({rows[i], labels[i]});
    return ds;
}

}  // namespace

TEST_CASE("train_naive_bayes: hand-checked moments and priors") {
    Dataset ds = make_ds({{1, 10}, {3, 14}, {5, 0}, {9, 4}, {7, 2}}, {0, 0, 1, 1, 1});
    NaiveBayesModel m = train_naive_bayes(ds);

    CHECK(m.log_prior[0] == doctest::Approx(std::log(0.4)).epsilon(1e-15));
    CHECK(m.log_prior[1] == doctest::Approx(std::log(0.6)).epsilon(1e-15));

    CHECK(m.mean[0] == std::vector<double>{2.0, 12.0});
    CHECK(m.mean[1] == std::vector<double>{7.0, 2.0});
    // variance over the class population, not the n-1 sample form
    CHECK(m.variance[0][0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.variance[0][1] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(m.variance[1][0] == doctest::Approx(8.0 / 3).epsilon(1e-15));
    CHECK(m.variance[1][1] == doctest::Approx(8.0 / 3).epsilon(1e-15));
}

TEST_CASE("train_naive_bayes: rejects empty and single-class data") {
    CHECK_THROWS_AS(train_naive_bayes(Dataset{}), ModelError);
    CHECK_THROWS_AS(train_naive_bayes(make_ds({{1}, {2}}, {0, 0})), ModelError);
    CHECK_THROWS_AS(train_naive_bayes(make_ds({{1}, {2}}, {1, 1})), ModelError);
}

TEST_CASE("classify_nb: separated clusters come back clean") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    SplitMix64 rng(99);
    for (int i = 0; i < 30; ++i) {
        double jx = double(rng.below(100)) / 100, jy = double(rng.below(100)) / 100;
        rows.push_back({0.0 + jx, 1.0 + jy});
        labels.push_back(0);
        rows.push_back({10.0 + jx, 11.0 + jy});
        labels.push_back(1);
    }
    Dataset ds = make_ds(rows, labels);
    NaiveBayesModel m = train_naive_bayes(ds);
    for (const auto& inst : ds.instances) CHECK(classify_nb(m, inst) == inst.class_label);
    CHECK(classify_nb(m, {{-1.0, 0.5}, 0}) == 0);
    CHECK(classify_nb(m, {{11.0, 12.5}, 0}) == 1);
}

TEST_CASE("classify_nb: constant columns survive via the variance floor") {
    Dataset ds = make_ds({{5, 1}, {5, 2}, {5, 8}, {5, 9}}, {0, 0, 1, 1});
    NaiveBayesModel m = train_naive_bayes(ds);
    CHECK(m.variance[0][0] == 1e-9);
    CHECK(m.variance[1][0] == 1e-9);
    CHECK(classify_nb(m, {{5, 1.5}, 0}) == 0);
    CHECK(classify_nb(m, {{5, 8.5}, 0}) == 1);
    // even far off the constant value both densities shrink in lockstep
    CHECK(classify_nb(m, {{500, 8.5}, 0}) == 1);
}

TEST_CASE("classify_nb: exact posterior tie falls to class 0") {
    Dataset ds = make_ds({{1}, {3}}, {0, 1});
    NaiveBayesModel m = train_naive_bayes(ds);
    CHECK(classify_nb(m, {{2.0}, 0}) == 0);
}

TEST_CASE("classify_nb: wrong arity is rejected") {
    Dataset ds = make_ds({{1, 2}, {3, 4}}, {0, 1});
    NaiveBayesModel m = train_naive_bayes(ds);
    CHECK_THROWS_AS(classify_nb(m, {{1.0}, 0}), ModelError);
    CHECK_THROWS_AS(classify_nb(m, {{1.0, 2.0, 3.0}, 0}), ModelError);
}

TEST_CASE("classify_nb: agrees with a from-scratch posterior computation") {
    SplitMix64 rng(2024);
    for (int round = 0; round < 25; ++round) {
        std::size_t n = 8 + rng.below(20), f = 1 + rng.below(4);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        std::size_t ones = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row;
            for (std::size_t a = 0; a < f; ++a) row.push_back(double(rng.below(40)) / 4);
            rows.push_back(row);
            int y = int(rng.below(2));
            labels.push_back(y);
            ones += y;
        }
        if (ones == 0 || ones == n) continue;
        Dataset ds = make_ds(rows, labels);
        NaiveBayesModel m = train_naive_bayes(ds);

        for (int k = 0; k < 20; ++k) {
            Instance x{{}, 0};
            for (std::size_t a = 0; a < f; ++a) x.values.push_back(double(rng.below(40)) / 4);

            double ll[2];
            for (int c = 0; c < 2; ++c) {
                // recompute the class moments right here, the long way
                double cnt = 0;
                ll[c] = 0;
                for (std::size_t a = 0; a < f; ++a) {
                    double sum = 0, cn = 0;
                    for (const auto& inst : ds.instances)
                        if (inst.class_label == c) sum += inst.values[a], cn += 1;
                    double mu = sum / cn;
                    double ss = 0;
                    for (const auto& inst : ds.instances)
                        if (inst.class_label == c) ss += (inst.values[a] - mu) * (inst.values[a] - mu);
                    double var = std::max(ss / cn, 1e-9);
                    double d = x.values[a] - mu;
                    ll[c] += -0.5 * std::log(2 * M_PI * var) - d * d / (2 * var);
                    cnt = cn;
                }
                ll[c] += std::log(cnt / double(n));
            }
            if (std::abs(ll[1] - ll[0]) < 1e-9) continue;  // too close to pin the argmax
            CHECK(classify_nb(m, x) == (ll[1] > ll[0] ? 1 : 0));
        }
    }
}

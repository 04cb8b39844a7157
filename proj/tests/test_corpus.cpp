#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "spamtree/arff.hpp"
#include "spamtree/split.hpp"

using namespace spamtree;

namespace {

Dataset make_ds(std::vector<std::vector<double>> rows, std::vector<int> labels,
                std::size_t features) {
    Dataset ds;
    ds.relation = "fixture";
    for (std::size_t a = 0; a < features; ++a)
        ds.schema.push_back({"a" + std::to_string(a), AttributeKind::numeric, {}});
    ds.schema.push_back({"class", AttributeKind::nominal, {"0", "1"}});
    for (std::size_t i = 0; i < rows.size(); ++i)
        ds.instances.push_back({rows[i], labels[i]});
    return ds;
}

// independent restatement of the generator, kept here so the library's
// stream can be cross-checked value by value
std::uint64_t mix64_reference(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string row_key(const Instance& inst) {
    std::ostringstream out;
    for (double v : inst.values) out << v << ',';
    out << inst.class_label;
    return out.str();
}

}  // namespace

TEST_CASE("arff: minimal document round trip of fields") {
    std::istringstream in(
        "% toy corpus\n"
        "@RELATION demo\n"
        "\n"
        "@attribute width numeric\n"
        "@ATTRIBUTE height REAL\n"
        "@attribute class {0,1}\n"
        "@data\n"
        "1.5, 2, 1\n"
        "0.25,-3.5,0\n");
    Dataset ds = parse_arff(in);
    CHECK(ds.relation == "demo");
    REQUIRE(ds.schema.size() == 3);
    CHECK(ds.schema[0].name == "width");
    CHECK(ds.schema[1].name == "height");
    CHECK(ds.schema[1].kind == AttributeKind::numeric);
    CHECK(ds.schema[2].kind == AttributeKind::nominal);
    CHECK(ds.feature_count() == 2);
    REQUIRE(ds.instances.size() == 2);
    CHECK(ds.instances[0].values == std::vector<double>{1.5, 2.0});
    CHECK(ds.instances[0].class_label == 1);
    CHECK(ds.instances[1].values == std::vector<double>{0.25, -3.5});
    CHECK(ds.instances[1].class_label == 0);
}

TEST_CASE("arff: quoted attribute names") {
    std::istringstream in(
        "@relation q\n"
        "@attribute 'char freq ;' numeric\n"
        "@attribute \"the class\" {ham,spam}\n"
        "@data\n"
        "4,spam\n");
    Dataset ds = parse_arff(in);
    CHECK(ds.schema[0].name == "char freq ;");
    CHECK(ds.schema[1].name == "the class");
    CHECK(ds.instances[0].class_label == 1);
}

TEST_CASE("arff: error positions and messages") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_arff(in);
    };

    SUBCASE("attribute before relation") {
        try {
            parse("@attribute x numeric\n@data\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(std::string(e.what()).find("@relation") != std::string::npos);
        }
    }
    SUBCASE("row arity") {
        try {
            parse("@relation r\n@attribute x numeric\n@attribute class {0,1}\n@data\n1,0\n1\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 6);
            CHECK(std::string(e.what()).find("expected 2 fields") != std::string::npos);
        }
    }
    SUBCASE("bad numeric value names the attribute") {
        try {
            parse("@relation r\n@attribute x numeric\n@attribute class {0,1}\n@data\nzap,0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 5);
            CHECK(std::string(e.what()).find("'x'") != std::string::npos);
        }
    }
    SUBCASE("undeclared class label") {
        try {
            parse("@relation r\n@attribute x numeric\n@attribute class {0,1}\n@data\n1,2\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 5);
        }
    }
    SUBCASE("nominal feature column rejected") {
        CHECK_THROWS_AS(
            parse("@relation r\n@attribute x {a,b}\n@attribute class {0,1}\n@data\n"),
            ParseError);
    }
    SUBCASE("class must have exactly two labels") {
        CHECK_THROWS_AS(
            parse("@relation r\n@attribute x numeric\n@attribute class {0,1,2}\n@data\n"),
            ParseError);
        CHECK_THROWS_AS(parse("@relation r\n@attribute x numeric\n@attribute y numeric\n@data\n"),
                        ParseError);
    }
    SUBCASE("declaration after data") {
        CHECK_THROWS_AS(parse("@relation r\n@attribute x numeric\n@attribute class {0,1}\n"
                              "@data\n1,0\n@attribute z numeric\n"),
                        ParseError);
    }
    SUBCASE("missing data section") {
        CHECK_THROWS_AS(parse("@relation r\n@attribute x numeric\n@attribute class {0,1}\n"),
                        ParseError);
    }
    SUBCASE("duplicate attribute name") {
        CHECK_THROWS_AS(
            parse("@relation r\n@attribute x numeric\n@attribute x numeric\n"
                  "@attribute class {0,1}\n@data\n"),
            ParseError);
    }
}

TEST_CASE("arff: serialize then parse preserves every field") {
    SplitMix64 rng(2024);
    for (int round = 0; round < 25; ++round) {
        Dataset ds;
        ds.relation = "rt" + std::to_string(round);
        std::size_t features = 1 + rng.below(4);
        for (std::size_t a = 0; a < features; ++a) {
            std::string name = "f" + std::to_string(a);
            if (a % 2 == 1) name = "odd name,with{nasties} " + std::to_string(a);
            ds.schema.push_back({name, AttributeKind::numeric, {}});
        }
        ds.schema.push_back({"class", AttributeKind::nominal, {"ham", "spam"}});
        std::size_t n = 1 + rng.below(12);
        for (std::size_t i = 0; i < n; ++i) {
            Instance inst;
            for (std::size_t a = 0; a < features; ++a) {
                double v = (double(rng.below(2000)) - 1000.0) / 64.0;
                if (rng.below(5) == 0) v = v / 3.0;  // non-terminating decimals
                inst.values.push_back(v);
            }
            inst.class_label = int(rng.below(2));
            ds.instances.push_back(inst);
        }

        std::istringstream in(serialize_arff(ds));
        Dataset back = parse_arff(in);
        REQUIRE(back.schema.size() == ds.schema.size());
        for (std::size_t a = 0; a < ds.schema.size(); ++a) {
            CHECK(back.schema[a].name == ds.schema[a].name);
            CHECK(back.schema[a].kind == ds.schema[a].kind);
        }
        REQUIRE(back.instances.size() == ds.instances.size());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(back.instances[i].values == ds.instances[i].values);  // exact doubles
            CHECK(back.instances[i].class_label == ds.instances[i].class_label);
        }
    }
}

TEST_CASE("spambase csv: corpus shape and canonical names") {
    std::istringstream in(
        "0,0.64,0.64,0,0.32,0,0,0,0,0,0,0.64,0,0,0,0.32,0,1.29,1.93,0,0.96,0,0,0,0,0,0,0,0,0,0,"
        "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0.778,0,0,3.756,61,278,1\n"
        "\n"
        "0.21,0.28,0.5,0,0.14,0.28,0.21,0.07,0,0.94,0.21,0.79,0.65,0.21,0.14,0.14,0.07,0.28,"
        "3.47,0,1.59,0,0.43,0.43,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0.132,0,"
        "0.372,0.18,0.048,5.114,101,1028,1\n");
    Dataset ds = parse_spambase_csv(in);
    CHECK(ds.relation == "spambase");
    REQUIRE(ds.schema.size() == 58);
    CHECK(ds.schema[0].name == "word_freq_make");
    CHECK(ds.schema[4].name == "word_freq_our");
    CHECK(ds.schema[48].name == "char_freq_;");
    CHECK(ds.schema[51].name == "char_freq_!");
    CHECK(ds.schema[54].name == "capital_run_length_average");
    CHECK(ds.schema[56].name == "capital_run_length_total");
    CHECK(ds.schema[57].kind == AttributeKind::nominal);
    REQUIRE(ds.instances.size() == 2);
    CHECK(ds.instances[0].values[1] == 0.64);
    CHECK(ds.instances[0].values[56] == 278.0);
    CHECK(ds.instances[0].class_label == 1);
    CHECK(ds.instances[1].values[18] == 3.47);
}

TEST_CASE("spambase csv: field and value errors") {
    std::istringstream short_row("0,1,2\n");
    CHECK_THROWS_AS(parse_spambase_csv(short_row), ParseError);

    std::string row;
    for (int i = 0; i < 57; ++i) row += "0,";
    std::istringstream bad_class(row + "2\n");
    try {
        parse_spambase_csv(bad_class);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("class column") != std::string::npos);
    }
}

TEST_CASE("splitmix64: library stream matches an independent restatement") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xDEADBEEFULL}) {
        SplitMix64 rng(seed);
        std::uint64_t state = seed;
        for (int i = 0; i < 20; ++i) CHECK(rng.next() == mix64_reference(state));
    }
}

TEST_CASE("splitmix64: bounded draws stay in range and cover values") {
    SplitMix64 rng(7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t v = rng.below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("stratified split: two-by-two corpus splits one per class") {
    Dataset ds = make_ds({{1}, {2}, {3}, {4}}, {0, 0, 1, 1}, 1);
    auto [train, test] = stratified_split(ds, 2, 9);
    CHECK(train.instances.size() == 2);
    CHECK(test.instances.size() == 2);
    CHECK(train.count_of(0) == 1);
    CHECK(train.count_of(1) == 1);
    CHECK(test.count_of(0) == 1);
    CHECK(test.count_of(1) == 1);
}

TEST_CASE("stratified split: class allocation follows the floor-and-remainder rule") {
    SplitMix64 rng(5150);
    for (int round = 0; round < 40; ++round) {
        std::size_t n = 3 + rng.below(60);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        std::size_t n1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            rows.push_back({double(i)});
            int y = rng.below(100) < 35 ? 1 : 0;
            labels.push_back(y);
            n1 += y;
        }
        if (n1 == 0 || n1 == n) continue;  // split() is class-agnostic; skip degenerate draws
        std::size_t train_count = 1 + rng.below(n - 1);
        Dataset ds = make_ds(rows, labels, 1);
        auto [train, test] = stratified_split(ds, train_count, rng.next());

        CHECK(train.instances.size() == train_count);
        CHECK(test.instances.size() == n - train_count);
        // per-class train share never drifts more than one instance from the
        // corpus proportion
        std::size_t n0 = n - n1;
        double want0 = double(train_count) * n0 / n;
        double want1 = double(train_count) * n1 / n;
        CHECK(std::abs(double(train.count_of(0)) - want0) <= 1.0);
        CHECK(std::abs(double(train.count_of(1)) - want1) <= 1.0);

        // union is exactly the corpus, per row multiset
        std::multiset<std::string> all, parts;
        for (const auto& inst : ds.instances) all.insert(row_key(inst));
        for (const auto& inst : train.instances) parts.insert(row_key(inst));
        for (const auto& inst : test.instances) parts.insert(row_key(inst));
        CHECK(all == parts);
    }
}

TEST_CASE("stratified split: same seed reproduces membership, seeds differ") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        rows.push_back({double(i), double(i % 7)});
        labels.push_back(i % 3 == 0 ? 1 : 0);
    }
    Dataset ds = make_ds(rows, labels, 2);

    auto [a_train, a_test] = stratified_split(ds, 25, 11);
    auto [b_train, b_test] = stratified_split(ds, 25, 11);
    REQUIRE(a_train.instances.size() == b_train.instances.size());
    for (std::size_t i = 0; i < a_train.instances.size(); ++i)
        CHECK(a_train.instances[i].values == b_train.instances[i].values);
    for (std::size_t i = 0; i < a_test.instances.size(); ++i)
        CHECK(a_test.instances[i].values == b_test.instances[i].values);

    auto [c_train, c_test] = stratified_split(ds, 25, 12);
    bool differs = false;
    for (std::size_t i = 0; i < a_train.instances.size(); ++i)
        differs = differs || a_train.instances[i].values != c_train.instances[i].values;
    CHECK(differs);
}

TEST_CASE("stratified split: bad train counts") {
    Dataset ds = make_ds({{1}, {2}, {3}}, {0, 1, 0}, 1);
    CHECK_THROWS_AS(stratified_split(ds, 0, 1), ModelError);
    CHECK_THROWS_AS(stratified_split(ds, 3, 1), ModelError);
    CHECK_THROWS_AS(stratified_split(ds, 99, 1), ModelError);
}

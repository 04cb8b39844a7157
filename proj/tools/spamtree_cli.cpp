#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spamtree/adtree.hpp"
#include "spamtree/arff.hpp"
#include "spamtree/c45.hpp"
#include "spamtree/inference.hpp"
#include "spamtree/metrics.hpp"
#include "spamtree/naive_bayes.hpp"
#include "spamtree/ontology.hpp"
#include "spamtree/split.hpp"

namespace fs = std::filesystem;
using namespace spamtree;

namespace {

// exit codes: 0 success, 1 a graph failed validation, 2 usage, 3 data error
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct TrainOptions {
    std::string data, format = "auto", out;
    TrainParams params;
};

struct EvaluateOptions : TrainOptions {
    std::size_t train_count = 4101;
    std::uint64_t seed = 1;
    std::string seeds;  // comma-separated sweep, overrides --seed
    bool json = false;
};

std::string detect_format(const std::string& format, const std::string& path) {
    if (format != "auto") return format;
    if (path.ends_with(".arff")) return "arff";
    if (path.ends_with(".csv")) return "csv";
    throw CLI::ValidationError("--format", "cannot infer the format of '" + path +
                                               "'; pass --format arff or --format csv");
}

// spam-corpus CSV, but the class column may be absent (classification input)
Dataset parse_csv_flexible(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    Dataset ds;
    ds.relation = "spambase";
    for (const char* name : kSpambaseAttributeNames)
        ds.schema.push_back({name, AttributeKind::numeric, {}});
    ds.schema.push_back({"class", AttributeKind::nominal, {"0", "1"}});

    std::string line;
    std::size_t line_no = 0, arity = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> fields;
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = line.find(',', start);
            std::string cell = line.substr(start, comma - start);
            const char* begin = cell.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (cell.empty() || end != begin + cell.size())
                throw ParseError("value '" + cell + "' is not numeric", line_no);
            fields.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (arity == 0) {
            arity = fields.size();
            if (arity != 57 && arity != 58)
                throw ParseError("expected 57 or 58 fields, got " +
                                     std::to_string(fields.size()),
                                 line_no);
        } else if (fields.size() != arity) {
            throw ParseError("expected " + std::to_string(arity) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        Instance inst;
        inst.class_label = 0;
        if (arity == 58) {
            double cls = fields.back();
            fields.pop_back();
            if (cls != 0.0 && cls != 1.0)
                throw ParseError("class value must be 0 or 1", line_no);
            inst.class_label = int(cls);
        }
        inst.values = std::move(fields);
        ds.instances.push_back(std::move(inst));
    }
    if (ds.instances.empty()) throw ParseError("'" + path + "' holds no instances");
    return ds;
}

Dataset load_dataset(const std::string& path, const std::string& format, bool labels_needed) {
    std::string kind = detect_format(format, path);
    if (kind == "arff") return parse_arff_file(path);
    if (labels_needed) return parse_spambase_csv_file(path);
    return parse_csv_flexible(path);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
}

nlohmann::json params_json(const TrainParams& p) {
    return {{"iterations", p.boosting_iterations},
            {"min_leaf", p.min_leaf},
            {"confidence", p.confidence_factor}};
}

struct TrainedEnsemble {
    DecisionTree j48;
    ADTreeModel adtree, ladtree;
    OntologyGraph j48_graph, adtree_graph, ladtree_graph;
};

TrainedEnsemble train_ensemble(const Dataset& ds, const TrainParams& params) {
    TrainedEnsemble e;
    e.j48 = train_c45(ds, params);
    e.adtree = train_adtree(ds, params.boosting_iterations);
    e.ladtree = train_ladtree(ds, params.boosting_iterations);
    e.j48_graph = tree_to_graph(e.j48);
    e.adtree_graph = adtree_to_graph(e.adtree);
    e.ladtree_graph = adtree_to_graph(e.ladtree);
    for (const auto& [name, graph] : {std::pair{"j48", &e.j48_graph},
                                      std::pair{"adtree", &e.adtree_graph},
                                      std::pair{"ladtree", &e.ladtree_graph}}) {
        ValidationReport report = validate(*graph);
        if (!report.ok)
            throw GraphError(std::string("exported ") + name +
                             " graph failed validation: " + report.violations.front());
    }
    return e;
}

void write_model_files(const fs::path& dir, const TrainedEnsemble& e) {
    write_file(dir / "j48.rdf", serialize_rdfxml(e.j48_graph));
    write_file(dir / "adtree.rdf", serialize_rdfxml(e.adtree_graph));
    write_file(dir / "ladtree.rdf", serialize_rdfxml(e.ladtree_graph));
    write_file(dir / "j48.txt", render_tree(e.j48));
}

int cmd_train(const TrainOptions& opt) {
    Dataset ds = load_dataset(opt.data, opt.format, true);
    TrainedEnsemble e = train_ensemble(ds, opt.params);

    fs::create_directories(opt.out);
    write_model_files(opt.out, e);

    nlohmann::json manifest = {
        {"command", "train"},
        {"data", opt.data},
        {"relation", ds.relation},
        {"instances", ds.instances.size()},
        {"spam", ds.count_of(1)},
        {"ham", ds.count_of(0)},
        {"features", ds.feature_count()},
        {"parameters", params_json(opt.params)},
        {"files",
         {{"j48", "j48.rdf"}, {"adtree", "adtree.rdf"}, {"ladtree", "ladtree.rdf"},
          {"j48_text", "j48.txt"}}},
    };
    write_file(fs::path(opt.out) / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "trained 3 models on " << ds.instances.size() << " instances ("
              << ds.count_of(1) << " spam / " << ds.count_of(0) << " ham)\n"
              << "j48: " << e.j48.internal_count() << " tests, " << e.j48.leaf_count()
              << " outcomes; adtree: " << e.adtree.units.size()
              << " units; ladtree: " << e.ladtree.units.size() << " units\n"
              << "wrote " << (fs::path(opt.out) / "manifest.json").string() << '\n';
    return kExitOk;
}

int cmd_validate(const std::vector<std::string>& files, bool json) {
    int worst = kExitOk;
    nlohmann::json all = nlohmann::json::array();
    for (const std::string& file : files) {
        try {
            OntologyGraph g = parse_rdfxml_file(file);
            ValidationReport report = validate(g);
            if (json) {
                nlohmann::json entry = nlohmann::json::parse(report.to_json());
                entry["file"] = file;
                all.push_back(std::move(entry));
            } else {
                std::cout << "== " << file << "\n" << report.to_text() << '\n';
            }
            if (!report.ok) worst = std::max(worst, kExitInvalid);
        } catch (const ParseError& e) {
            if (json)
                all.push_back({{"file", file}, {"ok", false}, {"error", e.what()}});
            else
                std::cout << "== " << file << "\nnot parseable: " << e.what() << "\n\n";
            worst = kExitData;
        }
    }
    if (json) std::cout << all.dump(2) << '\n';
    return worst;
}

EnsembleBundle load_bundle(const std::string& models_dir,
                           std::vector<std::string> feature_names) {
    fs::path dir(models_dir);
    EnsembleBundle bundle;
    bundle.j48 = parse_rdfxml_file((dir / "j48.rdf").string());
    bundle.adtree = parse_rdfxml_file((dir / "adtree.rdf").string());
    bundle.ladtree = parse_rdfxml_file((dir / "ladtree.rdf").string());
    bundle.feature_names = std::move(feature_names);

    for (const auto& [name, graph] : {std::pair{"j48.rdf", &bundle.j48},
                                      std::pair{"adtree.rdf", &bundle.adtree},
                                      std::pair{"ladtree.rdf", &bundle.ladtree}}) {
        ValidationReport report = validate(*graph);
        if (!report.ok)
            throw GraphError(std::string(name) + ": " + report.violations.front());
    }
    return bundle;
}

int cmd_classify(const std::string& models_dir, const std::string& data,
                 const std::string& format, const std::string& out) {
    Dataset ds = load_dataset(data, format, false);
    EnsembleBundle bundle = load_bundle(models_dir, ds.feature_names());
    std::string csv = classify_batch_csv(bundle, ds.instances);
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    return kExitOk;
}

struct SeedOutcome {
    std::uint64_t seed;
    double voting_f_spam, voting_f_ham;
};

SeedOutcome evaluate_once(const Dataset& ds, const EvaluateOptions& opt, std::uint64_t seed,
                          const fs::path& dir) {
    auto [train, test] = stratified_split(ds, opt.train_count, seed);

    TrainedEnsemble e = train_ensemble(train, opt.params);
    NaiveBayesModel nb = train_naive_bayes(train);

    // classification goes through the exported graphs, not the structs
    GraphClassifier j48_clf(e.j48_graph, ds.feature_names());
    GraphClassifier adt_clf(e.adtree_graph, ds.feature_names());
    GraphClassifier lad_clf(e.ladtree_graph, ds.feature_names());

    std::vector<int> j48_labels, adt_labels, lad_labels, nb_labels, truth;
    for (const Instance& x : test.instances) {
        j48_labels.push_back(j48_clf.classify(x));
        adt_labels.push_back(adt_clf.classify(x));
        lad_labels.push_back(lad_clf.classify(x));
        nb_labels.push_back(classify_nb(nb, x));
        truth.push_back(x.class_label);
    }
    auto [spam, ham] = evaluate_all(j48_labels, adt_labels, lad_labels, nb_labels, truth);

    fs::create_directories(dir);
    write_model_files(dir, e);
    write_file(dir / "metrics.txt", render_tables_text(spam, ham));
    write_file(dir / "metrics.json", tables_to_json(spam, ham) + "\n");
    write_file(dir / "metrics.csv", tables_to_csv(spam, ham));

    nlohmann::json manifest = {
        {"command", "evaluate"},
        {"data", opt.data},
        {"seed", seed},
        {"train_count", opt.train_count},
        {"train", {{"spam", train.count_of(1)}, {"ham", train.count_of(0)}}},
        {"test", {{"spam", test.count_of(1)}, {"ham", test.count_of(0)}}},
        {"parameters", params_json(opt.params)},
        {"files",
         {{"j48", "j48.rdf"}, {"adtree", "adtree.rdf"}, {"ladtree", "ladtree.rdf"},
          {"j48_text", "j48.txt"}, {"metrics_text", "metrics.txt"},
          {"metrics_json", "metrics.json"}, {"metrics_csv", "metrics.csv"}}},
    };
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    const MetricsRow& vs = spam.rows[4];
    const MetricsRow& vh = ham.rows[4];
    if (!vs.f_measure || !vh.f_measure)
        throw ModelError("voting F-measure is undefined on seed " + std::to_string(seed) +
                         "; the test split is degenerate");
    return {seed, *vs.f_measure, *vh.f_measure};
}

int cmd_evaluate(const EvaluateOptions& opt) {
    Dataset ds = load_dataset(opt.data, opt.format, true);

    std::vector<std::uint64_t> seeds;
    if (opt.seeds.empty()) {
        seeds.push_back(opt.seed);
    } else {
        std::stringstream ss(opt.seeds);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const char* begin = item.c_str();
            char* end = nullptr;
            unsigned long long v = std::strtoull(begin, &end, 10);
            if (item.empty() || end != begin + item.size())
                throw CLI::ValidationError("--seeds", "'" + item + "' is not a seed");
            seeds.push_back(v);
        }
        if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
    }

    if (seeds.size() == 1) {
        evaluate_once(ds, opt, seeds[0], opt.out);
        std::ifstream in(fs::path(opt.out) / (opt.json ? "metrics.json" : "metrics.txt"));
        std::cout << in.rdbuf();
        return kExitOk;
    }

    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : seeds)
        outcomes.push_back(
            evaluate_once(ds, opt, seed, fs::path(opt.out) / ("seed-" + std::to_string(seed))));

    auto stats = [](auto value) {
        return [value](const std::vector<SeedOutcome>& xs) {
            double mean = 0;
            for (const SeedOutcome& x : xs) mean += value(x);
            mean /= double(xs.size());
            double var = 0;
            for (const SeedOutcome& x : xs) var += (value(x) - mean) * (value(x) - mean);
            var /= double(xs.size());
            return std::pair{mean, var};
        };
    };
    auto [spam_mean, spam_var] = stats([](const SeedOutcome& x) { return x.voting_f_spam; })(outcomes);
    auto [ham_mean, ham_var] = stats([](const SeedOutcome& x) { return x.voting_f_ham; })(outcomes);

    nlohmann::json summary = {{"seeds", nlohmann::json::array()},
                              {"voting_f_spam", {{"mean", spam_mean}, {"variance", spam_var}}},
                              {"voting_f_ham", {{"mean", ham_mean}, {"variance", ham_var}}}};
    for (const SeedOutcome& x : outcomes)
        summary["seeds"].push_back({{"seed", x.seed},
                                    {"voting_f_spam", x.voting_f_spam},
                                    {"voting_f_ham", x.voting_f_ham},
                                    {"dir", "seed-" + std::to_string(x.seed)}});
    write_file(fs::path(opt.out) / "summary.json", summary.dump(2) + "\n");

    if (opt.json) {
        std::cout << summary.dump(2) << '\n';
    } else {
        for (const SeedOutcome& x : outcomes) {
            char line[128];
            std::snprintf(line, sizeof line, "seed %llu: voting F %.3f (spam) %.3f (ham)\n",
                          static_cast<unsigned long long>(x.seed), x.voting_f_spam,
                          x.voting_f_ham);
            std::cout << line;
        }
        char line[160];
        std::snprintf(line, sizeof line,
                      "mean %.3f (spam) %.3f (ham), variance %.6f (spam) %.6f (ham)\n",
                      spam_mean, ham_mean, spam_var, ham_var);
        std::cout << line;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spam/ham decision-model toolkit: trains tree models, exports them as RDF\n"
                 "ontologies, validates the graphs, and classifies mail by querying them"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    TrainOptions train_opt;
    CLI::App* train = app.add_subcommand("train", "train models and export RDF graphs");
    train->add_option("--data", train_opt.data, "corpus file (.arff or .csv)")->required();
    train->add_option("--format", train_opt.format, "arff, csv, or auto (by extension)")
        ->check(CLI::IsMember({"auto", "arff", "csv"}))
        ->capture_default_str();
    train->add_option("--iterations", train_opt.params.boosting_iterations,
                      "boosting rounds for the alternating trees")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    train->add_option("--min-leaf", train_opt.params.min_leaf,
                      "stop splitting nodes below twice this many instances")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train->add_option("--confidence", train_opt.params.confidence_factor,
                      "pruning confidence factor")
        ->check(CLI::Range(1e-6, 1.0))
        ->capture_default_str();
    train->add_option("--out", train_opt.out, "output directory")->required();

    std::vector<std::string> validate_files;
    bool validate_json = false;
    CLI::App* validate_cmd = app.add_subcommand("validate", "check RDF model documents");
    validate_cmd->add_option("files", validate_files, "RDF/XML documents")->required();
    validate_cmd->add_flag("--json", validate_json, "machine-readable reports");

    std::string classify_models, classify_data, classify_format = "auto", classify_out;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "label instances by querying exported graphs");
    classify_cmd->add_option("--models", classify_models,
                             "directory holding j48.rdf, adtree.rdf, ladtree.rdf")
        ->required();
    classify_cmd->add_option("--data", classify_data,
                             "instances (.arff, or .csv with or without the class column)")
        ->required();
    classify_cmd->add_option("--format", classify_format, "arff, csv, or auto")
        ->check(CLI::IsMember({"auto", "arff", "csv"}))
        ->capture_default_str();
    classify_cmd->add_option("--out", classify_out, "write the CSV here instead of stdout");

    EvaluateOptions eval_opt;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "split, train, classify via graphs, and score");
    evaluate_cmd->add_option("--data", eval_opt.data, "corpus file (.arff or .csv)")->required();
    evaluate_cmd->add_option("--format", eval_opt.format, "arff, csv, or auto")
        ->check(CLI::IsMember({"auto", "arff", "csv"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--train-count", eval_opt.train_count,
                             "instances in the training side")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    CLI::Option* seed_opt =
        evaluate_cmd->add_option("--seed", eval_opt.seed, "split seed")->capture_default_str();
    evaluate_cmd->add_option("--seeds", eval_opt.seeds, "comma-separated seed sweep")
        ->excludes(seed_opt);
    evaluate_cmd->add_option("--iterations", eval_opt.params.boosting_iterations,
                             "boosting rounds for the alternating trees")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    evaluate_cmd->add_option("--min-leaf", eval_opt.params.min_leaf,
                             "stop splitting nodes below twice this many instances")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate_cmd->add_option("--confidence", eval_opt.params.confidence_factor,
                             "pruning confidence factor")
        ->check(CLI::Range(1e-6, 1.0))
        ->capture_default_str();
    evaluate_cmd->add_option("--out", eval_opt.out, "output directory")->required();
    evaluate_cmd->add_flag("--json", eval_opt.json, "print metrics as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (train->parsed()) return cmd_train(train_opt);
        if (validate_cmd->parsed()) return cmd_validate(validate_files, validate_json);
        if (classify_cmd->parsed())
            return cmd_classify(classify_models, classify_data, classify_format, classify_out);
        return cmd_evaluate(eval_opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}

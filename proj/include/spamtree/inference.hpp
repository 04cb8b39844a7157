#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spamtree/dataset.hpp"
#include "spamtree/rdf.hpp"

namespace spamtree {

// Classifies instances by walking an ontology graph itself — triple lookups,
// not the in-memory model structs. Tree graphs are walked from the root test
// to an output subject; alternating-tree graphs (detected by a rootPrediction
// triple) sum the reached branch predictions and compare against zero.
// feature_names maps the graph's attribute literals to positions in x.values.
// The triple index is built once in the constructor, so batch callers pay the
// graph scan a single time. Throws GraphError on dangling references or
// schema violations, ModelError when an attribute is missing from
// feature_names.
class GraphClassifier {
public:
    GraphClassifier(const OntologyGraph& g, const std::vector<std::string>& feature_names);
    ~GraphClassifier();
    GraphClassifier(GraphClassifier&&) noexcept;
    GraphClassifier& operator=(GraphClassifier&&) noexcept;

    int classify(const Instance& x) const;

private:
    class Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot convenience over GraphClassifier.
int query_classify(const OntologyGraph& g, const Instance& x,
                   const std::vector<std::string>& feature_names);

// Majority label. Exactly three votes, each 0 or 1; throws ModelError otherwise.
int vote(std::span<const int> labels);

struct EnsembleBundle {
    OntologyGraph j48;
    OntologyGraph adtree;
    OntologyGraph ladtree;
    std::vector<std::string> feature_names;
};

struct VotedResult {
    std::array<int, 3> model_labels{};  // j48, adtree, ladtree
    int final_label = 0;
};

VotedResult classify_email(const EnsembleBundle& bundle, const Instance& x);

// CSV with header "index,j48,adtree,ladtree,final", one row per instance.
std::string classify_batch_csv(const EnsembleBundle& bundle,
                               const std::vector<Instance>& instances);

}  // namespace spamtree

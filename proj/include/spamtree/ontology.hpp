#pragma once

#include <string>
#include <vector>

#include "spamtree/adtree.hpp"
#include "spamtree/rdf.hpp"
#include "spamtree/tree.hpp"

namespace spamtree {

// Subject IRIs live under this root; test node n is <base>Test<n>, its
// outcome resource <base>Test<n>/output.
inline const char kTreeSubjectBase[] = "http://DecisionTree/";

// Relation-namespace predicates (see kRelationNamespace).
namespace pred {
inline const char kAttribute[] = "attribute";
inline const char kOperator[] = "operator";
inline const char kValue[] = "value";
inline const char kIsElementOf[] = "isElementOf";
inline const char kTrueChild[] = "trueChild";
inline const char kFalseChild[] = "falseChild";
inline const char kDecision[] = "decision";
inline const char kInfo[] = "info";
inline const char kRootPrediction[] = "rootPrediction";
inline const char kPredTrue[] = "predTrue";
inline const char kPredFalse[] = "predFalse";
inline const char kParent[] = "parent";
}  // namespace pred

// Decision tree -> triples. Nodes are numbered breadth-first from 1. Each
// internal node n yields six triples on subject Test<n>: attribute, operator
// (always "<="), value, isElementOf (resource Test<n>/output), trueChild and
// falseChild (resources naming the child subjects). Each leaf n yields two
// triples on subject Test<n>/output: decision and info ("(covered/errors)").
OntologyGraph tree_to_graph(const DecisionTree& tree);

// Exact inverse over graphs produced by tree_to_graph; also accepts any graph
// passing validate() with the same shape. feature_names gives the schema the
// rebuilt tree classifies against (graphs carry attribute names, instances
// are positional). Throws GraphError (naming the offending subject) on schema
// violations, dangling children, or cycles; ModelError when the graph names
// an attribute missing from feature_names.
DecisionTree graph_to_tree(const OntologyGraph& g,
                           const std::vector<std::string>& feature_names);

// Alternating tree -> triples. A Root subject carries rootPrediction; unit u
// (numbered from 1 in creation order) becomes subject Test<u> with the same
// four test predicates plus predTrue/predFalse literals and a parent resource
// (Root, or Test<j>/true / Test<j>/false naming a branch of an earlier unit).
OntologyGraph adtree_to_graph(const ADTreeModel& model);

ADTreeModel graph_to_adtree(const OntologyGraph& g,
                            const std::vector<std::string>& feature_names);

struct ValidationReport {
    bool ok = false;
    std::vector<Triple> rows;              // the graph's triples, 1-based rows
    std::vector<std::string> violations;   // empty iff ok

    // "Your RDF document validated successfully." plus the numbered triple
    // table, or the violations when not ok.
    std::string to_text() const;
    std::string to_json() const;
};

// Structural checks for both graph shapes: every test subject carries exactly
// one attribute/operator/value/isElementOf (plus child or parent/prediction
// triples per shape), every output subject exactly one decision, child and
// parent references resolve, and the node graph is a single acyclic tree.
ValidationReport validate(const OntologyGraph& g);

}  // namespace spamtree

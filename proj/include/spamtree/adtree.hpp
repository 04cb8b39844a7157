#pragma once

#include <string>
#include <vector>

#include "spamtree/dataset.hpp"

namespace spamtree {

// One splitter unit of an alternating decision tree. Prediction nodes are
// numbered: 0 is the root; unit j's true branch is node 2j+1 and its false
// branch is node 2j+2. parent_node names the prediction node under which the
// unit's test applies.
struct SplitterUnit {
    int parent_node = 0;
    int attribute = 0;
    double threshold = 0.0;
    double pred_true = 0.0;
    double pred_false = 0.0;
};

struct ADTreeModel {
    double root_prediction = 0.0;
    std::vector<SplitterUnit> units;  // creation order; parents precede children
    std::vector<std::string> attribute_names;
};

// Sum of the root prediction and the branch predictions of every unit whose
// parent prediction node is reached by x. Positive score means spam.
double adtree_score(const ADTreeModel& model, const Instance& x);

inline int classify_adtree(const ADTreeModel& model, const Instance& x) {
    return adtree_score(model, x) > 0.0 ? 1 : 0;
}

// Boosted alternating decision tree: each round adds the splitter unit
// minimizing Z = 2*(sqrt(W+t W-t) + sqrt(W+f W-f)) + W(outside precondition)
// over all (existing prediction node, attribute, midpoint threshold) triples,
// then reweights the covered instances by exp(-y * prediction). Root is the
// unsmoothed half log-odds of the class counts; branch predictions smooth by
// +1. Throws ModelError when the data is empty or single-class.
ADTreeModel train_adtree(const Dataset& ds, int iterations);

// LogitBoost variant fitting the same model shape: per round, working
// responses z = (y - p) / (p(1-p)) (p clamped away from 0/1 and z truncated
// to +-4) are fit by the weighted-least-squares best single test; branch
// predictions are half the fitted means.
ADTreeModel train_ladtree(const Dataset& ds, int iterations);

}  // namespace spamtree

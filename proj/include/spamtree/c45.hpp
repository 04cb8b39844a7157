#pragma once

#include <optional>

#include "spamtree/dataset.hpp"
#include "spamtree/tree.hpp"

namespace spamtree {

struct TrainParams {
    int min_leaf = 2;                // nodes under 2*min_leaf instances become leaves
    double confidence_factor = 0.25; // pessimistic-pruning confidence, in (0, 1]
    int boosting_iterations = 15;    // rounds for the boosted tree learners
};

// Binary Shannon entropy of a two-class count pair, in [0, 1].
// Throws ModelError when both counts are zero.
double entropy(double count0, double count1);

struct SplitCandidate {
    double threshold = 0.0;
    double gain_ratio = 0.0;
    double info_gain = 0.0;
};

// Best threshold for one attribute by gain ratio. Candidate thresholds are
// midpoints between consecutive distinct sorted values. Returns nullopt when
// the attribute is constant or no candidate has positive information gain.
// Ties go to the lowest threshold.
std::optional<SplitCandidate> best_split(const Dataset& ds, std::size_t attribute);

// Grows a C4.5-style tree: at each node, attributes whose information gain is
// at least the average over splittable attributes compete on gain ratio (ties
// to the lowest attribute index, then lowest threshold). Recursion stops on a
// pure node, fewer than 2*min_leaf instances, or no splittable attribute. The
// grown tree is then pruned bottom-up with the pessimistic error estimate at
// the given confidence factor; pruning only ever replaces a subtree by a
// leaf. Throws ModelError on an empty dataset.
DecisionTree train_c45(const Dataset& ds, const TrainParams& params = {});

// Pessimistic upper bound on the count of unseen errors for a leaf that saw
// `errors` mistakes out of `covered` instances; the classic Wilson-style
// bound with z = normal quantile of 1 - confidence. Exposed for tests.
double pessimistic_extra_errors(double covered, double errors, double confidence);

}  // namespace spamtree

#pragma once

#include <vector>

#include "spamtree/dataset.hpp"

namespace spamtree {

// Gaussian naive Bayes over the numeric features: per class, a prior plus a
// (mean, variance) pair per attribute. Variances are floored at 1e-9 so
// constant columns stay usable.
struct NaiveBayesModel {
    double log_prior[2] = {0.0, 0.0};
    std::vector<double> mean[2];
    std::vector<double> variance[2];
};

// Throws ModelError when the data is empty or single-class.
NaiveBayesModel train_naive_bayes(const Dataset& ds);

// Argmax of log prior + sum of per-attribute log densities; ties go to 0.
int classify_nb(const NaiveBayesModel& model, const Instance& x);

}  // namespace spamtree

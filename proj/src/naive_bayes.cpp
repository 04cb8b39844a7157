#include "spamtree/naive_bayes.hpp"

#include <cmath>

namespace spamtree {

NaiveBayesModel train_naive_bayes(const Dataset& ds) {
    if (ds.instances.empty()) throw ModelError("cannot train on an empty dataset");
    std::size_t counts[2] = {ds.count_of(0), ds.count_of(1)};
    if (counts[0] == 0 || counts[1] == 0)
        throw ModelError("naive bayes training needs both classes present");

    std::size_t m = ds.feature_count();
    NaiveBayesModel model;
    for (int c : {0, 1}) {
        model.log_prior[c] = std::log(double(counts[c]) / ds.instances.size());
        model.mean[c].assign(m, 0.0);
        model.variance[c].assign(m, 0.0);
    }
    for (const auto& inst : ds.instances)
        for (std::size_t a = 0; a < m; ++a) model.mean[inst.class_label][a] += inst.values[a];
    for (int c : {0, 1})
        for (std::size_t a = 0; a < m; ++a) model.mean[c][a] /= counts[c];
    for (const auto& inst : ds.instances)
        for (std::size_t a = 0; a < m; ++a) {
            double d = inst.values[a] - model.mean[inst.class_label][a];
            model.variance[inst.class_label][a] += d * d;
        }
    for (int c : {0, 1})
        for (std::size_t a = 0; a < m; ++a) {
            model.variance[c][a] /= counts[c];
            if (model.variance[c][a] < 1e-9) model.variance[c][a] = 1e-9;
        }
    return model;
}

int classify_nb(const NaiveBayesModel& model, const Instance& x) {
    if (x.values.size() != model.mean[0].size())
        throw ModelError("instance has " + std::to_string(x.values.size()) +
                         " values, model expects " + std::to_string(model.mean[0].size()));
    double ll[2];
    for (int c : {0, 1}) {
        ll[c] = model.log_prior[c];
        for (std::size_t a = 0; a < x.values.size(); ++a) {
            double var = model.variance[c][a];
            double d = x.values[a] - model.mean[c][a];
            ll[c] += -0.5 * std::log(2 * M_PI * var) - d * d / (2 * var);
        }
    }
    return ll[1] > ll[0] ? 1 : 0;
}

}  // namespace spamtree

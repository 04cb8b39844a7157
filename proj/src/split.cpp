#include "spamtree/split.hpp"

#include <algorithm>
#include <limits>

namespace spamtree {

std::uint64_t SplitMix64::below(std::uint64_t n) {
    // accept only draws under the largest multiple of n, then reduce
    std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;  // 2^64 mod n
    if (rem == 0) return next() % n;
    std::uint64_t limit = 0 - rem;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % n;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, std::size_t train_count,
                                             std::uint64_t seed) {
    std::size_t n = ds.instances.size();
    if (train_count == 0 || train_count >= n)
        throw ModelError("train count must be in [1, " + std::to_string(n ? n - 1 : 0) +
                         "], got " + std::to_string(train_count));

    std::vector<std::size_t> idx[2];
    for (std::size_t i = 0; i < n; ++i) idx[ds.instances[i].class_label].push_back(i);

    SplitMix64 rng(seed);
    for (auto& v : idx)
        for (std::size_t i = v.size(); i-- > 1;)
            std::swap(v[i], v[rng.below(i + 1)]);

    std::size_t take[2] = {train_count * idx[0].size() / n, train_count * idx[1].size() / n};
    std::size_t rem = train_count - take[0] - take[1];
    if (rem) take[idx[0].size() >= idx[1].size() ? 0 : 1] += rem;
    // floors keep each class proportional; a class can only overflow via the
    // remainder, in which case the excess shifts to the other class
    for (int c : {0, 1}) {
        if (take[c] > idx[c].size()) {
            take[1 - c] += take[c] - idx[c].size();
            take[c] = idx[c].size();
        }
    }

    std::vector<std::size_t> train_idx, test_idx;
    for (int c : {0, 1}) {
        train_idx.insert(train_idx.end(), idx[c].begin(), idx[c].begin() + take[c]);
        test_idx.insert(test_idx.end(), idx[c].begin() + take[c], idx[c].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    Dataset train{ds.relation, ds.schema, {}}, test{ds.relation, ds.schema, {}};
    train.instances.reserve(train_idx.size());
    test.instances.reserve(test_idx.size());
    for (std::size_t i : train_idx) train.instances.push_back(ds.instances[i]);
    for (std::size_t i : test_idx) test.instances.push_back(ds.instances[i]);
    return {std::move(train), std::move(test)};
}

}  // namespace spamtree

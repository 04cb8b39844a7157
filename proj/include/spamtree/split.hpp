#pragma once

#include <cstdint>
#include <utility>

#include "spamtree/dataset.hpp"

namespace spamtree {

// SplitMix64: tiny, well-mixed, identical output on every platform. That
// last property is the point — train/test membership must reproduce
// byte-for-byte across machines for a given seed, so std::mt19937 plus
// std::shuffle (implementation-defined) is not an option.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n) by rejection, so no modulo bias.
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t state_;
};

// Splits ds into (train, test) with train_count instances in train, keeping
// the class proportions of each side within one instance of the corpus
// proportions. Per-class allocation is floor(train_count * n_c / N) with the
// remainder going to the larger class (ties to class 0). Selection is a
// seeded Fisher-Yates shuffle per class; chosen indices are re-sorted so both
// sides preserve corpus order. Requires 0 < train_count < instance count.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, std::size_t train_count,
                                             std::uint64_t seed);

}  // namespace spamtree

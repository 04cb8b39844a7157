#pragma once

#include <string>
#include <vector>

#include "spamtree/dataset.hpp"

namespace spamtree {

// Node in a binary decision tree, stored in the tree's arena. Internal nodes
// test value(attribute) <= threshold: true goes left, false goes right.
// Leaves carry the training mass that reached them (covered) and how much of
// it was mislabeled (errors); both stay real-valued to survive pruning math.
struct TreeNode {
    bool leaf = false;

    // internal
    int attribute = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;

    // leaf
    int label = 0;
    double covered = 0.0;
    double errors = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;          // nodes[root] is the root
    int root = -1;
    std::vector<std::string> attribute_names;  // feature attributes, schema order

    std::size_t leaf_count() const;
    std::size_t internal_count() const;
};

// Walks the tree; equality at a threshold goes down the <= branch.
// Throws ModelError when x has the wrong number of values.
int classify_tree(const DecisionTree& tree, const Instance& x);

// Text rendering in the usual indented dump style:
//   word_freq_our <= 0.71
//   |   word_freq_your <= 1.04: 0 (824.0/29.0)
//   |   word_freq_your > 1.04
//   ...
// Leaf counts print errors only when nonzero.
std::string render_tree(const DecisionTree& tree);

}  // namespace spamtree

#include "spamtree/tree.hpp"

#include <sstream>
#include <string>

#include "spamtree/numformat.hpp"

namespace spamtree {

std::size_t DecisionTree::leaf_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.leaf;
    return n;
}

std::size_t DecisionTree::internal_count() const {
    return nodes.size() - leaf_count();
}

int classify_tree(const DecisionTree& tree, const Instance& x) {
    if (tree.root < 0 || tree.nodes.empty()) throw ModelError("empty tree");
    if (x.values.size() != tree.attribute_names.size())
        throw ModelError("instance has " + std::to_string(x.values.size()) +
                         " values, tree expects " + std::to_string(tree.attribute_names.size()));
    int cur = tree.root;
    while (!tree.nodes[cur].leaf) {
        const TreeNode& node = tree.nodes[cur];
        cur = x.values[node.attribute] <= node.threshold ? node.left : node.right;
    }
    return tree.nodes[cur].label;
}

namespace {

void render_node(const DecisionTree& tree, int id, int depth, std::ostringstream& out) {
    const TreeNode& node = tree.nodes[id];
    std::string indent;
    for (int i = 0; i < depth; ++i) indent += "|   ";
    const std::string& attr = tree.attribute_names[node.attribute];
    std::string thr = shortest_decimal(node.threshold);
    for (int branch = 0; branch < 2; ++branch) {
        int child = branch == 0 ? node.left : node.right;
        out << indent << attr << (branch == 0 ? " <= " : " > ") << thr;
        const TreeNode& c = tree.nodes[child];
        if (c.leaf)
            out << ": " << c.label << ' ' << format_counts(c.covered, c.errors) << '\n';
        else {
            out << '\n';
            render_node(tree, child, depth + 1, out);
        }
    }
}

}  // namespace

std::string render_tree(const DecisionTree& tree) {
    if (tree.root < 0 || tree.nodes.empty()) throw ModelError("empty tree");
    std::ostringstream out;
    const TreeNode& root = tree.nodes[tree.root];
    if (root.leaf)
        out << ": " << root.label << ' ' << format_counts(root.covered, root.errors) << '\n';
    else
        render_node(tree, tree.root, 0, out);
    return out.str();
}

}  // namespace spamtree

#include "spamtree/c45.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace spamtree {

namespace {

// Acklam's rational approximation to the standard normal quantile, refined
// with one Halley step against erfc; accurate to a few ulp, which the
// pruning slack dwarfs by thirteen orders of magnitude.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

struct RowSplit {
    double threshold, gain_ratio, info_gain;
};

double entropy_raw(double c0, double c1) {
    double t = c0 + c1, e = 0.0;
    if (c0 > 0) e -= (c0 / t) * std::log2(c0 / t);
    if (c1 > 0) e -= (c1 / t) * std::log2(c1 / t);
    return e;
}

std::optional<RowSplit> best_split_rows(const Dataset& ds, const std::vector<int>& rows,
                                        std::size_t attribute) {
    std::vector<std::pair<double, int>> pairs;  // (value, label), value-sorted
    pairs.reserve(rows.size());
    int tot1 = 0;
    for (int i : rows) {
        const Instance& inst = ds.instances[i];
        pairs.emplace_back(inst.values[attribute], inst.class_label);
        tot1 += inst.class_label;
    }
    std::sort(pairs.begin(), pairs.end());
    int n = static_cast<int>(pairs.size());
    int tot0 = n - tot1;
    double base = entropy_raw(tot0, tot1);

    std::optional<RowSplit> best;
    int l0 = 0, l1 = 0;
    for (int k = 0; k + 1 < n; ++k) {
        (pairs[k].second == 1 ? l1 : l0)++;
        if (pairs[k].first == pairs[k + 1].first) continue;
        int nl = l0 + l1, nr = n - nl;
        double thr = (pairs[k].first + pairs[k + 1].first) / 2;
        int r0 = tot0 - l0, r1 = tot1 - l1;
        double rem = (double(nl) / n) * entropy_raw(l0, l1) +
                     (double(nr) / n) * entropy_raw(r0, r1);
        double gain = base - rem;
        if (gain <= 1e-12) continue;
        double split_info = entropy_raw(nl, nr);
        if (split_info <= 0) continue;
        double ratio = gain / split_info;
        if (!best || ratio > best->gain_ratio + 1e-12) best = RowSplit{thr, ratio, gain};
    }
    return best;
}

struct NodeStats {
    int n0 = 0, n1 = 0;

    int majority() const { return n1 > n0 ? 1 : 0; }
    double covered() const { return n0 + n1; }
    double errors() const { return std::min(n0, n1); }
};

struct Grower {
    const Dataset& ds;
    const TrainParams& params;
    std::vector<TreeNode> nodes;
    std::vector<NodeStats> stats;

    int make_leaf(const NodeStats& st) {
        TreeNode leaf;
        leaf.leaf = true;
        leaf.label = st.majority();
        leaf.covered = st.covered();
        leaf.errors = st.errors();
        nodes.push_back(leaf);
        stats.push_back(st);
        return static_cast<int>(nodes.size()) - 1;
    }

    int grow(const std::vector<int>& rows) {
        NodeStats st;
        for (int i : rows) (ds.instances[i].class_label == 1 ? st.n1 : st.n0)++;
        if (st.n0 == 0 || st.n1 == 0 || rows.size() < std::size_t(2) * params.min_leaf)
            return make_leaf(st);

        // attributes with at least average info gain compete on gain ratio;
        // scanning in attribute order keeps ties on the lowest index
        std::vector<std::pair<std::size_t, RowSplit>> cands;
        for (std::size_t a = 0; a < ds.feature_count(); ++a)
            if (auto s = best_split_rows(ds, rows, a))
                cands.emplace_back(a, *s);
        if (cands.empty()) return make_leaf(st);

        double avg_gain = 0.0;
        for (const auto& [a, s] : cands) avg_gain += s.info_gain;
        avg_gain /= cands.size();
        const std::pair<std::size_t, RowSplit>* best = nullptr;
        for (const auto& cand : cands) {
            if (cand.second.info_gain < avg_gain - 1e-12) continue;
            if (!best || cand.second.gain_ratio > best->second.gain_ratio) best = &cand;
        }

        std::vector<int> lo, hi;
        for (int i : rows)
            (ds.instances[i].values[best->first] <= best->second.threshold ? lo : hi).push_back(i);

        TreeNode node;
        node.attribute = static_cast<int>(best->first);
        node.threshold = best->second.threshold;
        int id = static_cast<int>(nodes.size());
        nodes.push_back(node);
        stats.push_back(st);
        int left = grow(lo);
        int right = grow(hi);
        nodes[id].left = left;
        nodes[id].right = right;
        return id;
    }

    double subtree_estimate(int id, double cf) const {
        const TreeNode& node = nodes[id];
        if (node.leaf) return node.errors + pessimistic_extra_errors(node.covered, node.errors, cf);
        return subtree_estimate(node.left, cf) + subtree_estimate(node.right, cf);
    }

    void prune(int id, double cf) {
        if (nodes[id].leaf) return;
        prune(nodes[id].left, cf);
        prune(nodes[id].right, cf);
        const NodeStats& st = stats[id];
        double as_leaf = st.errors() + pessimistic_extra_errors(st.covered(), st.errors(), cf);
        double as_tree = subtree_estimate(nodes[id].left, cf) + subtree_estimate(nodes[id].right, cf);
        if (as_leaf <= as_tree + 0.1) {
            TreeNode leaf;
            leaf.leaf = true;
            leaf.label = st.majority();
            leaf.covered = st.covered();
            leaf.errors = st.errors();
            nodes[id] = leaf;
        }
    }

    // drop nodes orphaned by pruning
    int compact(int id, std::vector<TreeNode>& out) const {
        TreeNode node = nodes[id];
        int new_id = static_cast<int>(out.size());
        out.push_back(node);
        if (!node.leaf) {
            out[new_id].left = compact(node.left, out);
            out[new_id].right = compact(node.right, out);
        }
        return new_id;
    }
};

}  // namespace

double entropy(double count0, double count1) {
    if (count0 <= 0 && count1 <= 0) throw ModelError("entropy of an empty distribution");
    return entropy_raw(count0, count1);
}

std::optional<SplitCandidate> best_split(const Dataset& ds, std::size_t attribute) {
    if (attribute >= ds.feature_count())
        throw ModelError("attribute index " + std::to_string(attribute) + " out of range");
    std::vector<int> rows(ds.instances.size());
    std::iota(rows.begin(), rows.end(), 0);
    auto s = best_split_rows(ds, rows, attribute);
    if (!s) return std::nullopt;
    return SplitCandidate{s->threshold, s->gain_ratio, s->info_gain};
}

double pessimistic_extra_errors(double covered, double errors, double confidence) {
    double N = covered, e = errors, cf = confidence;
    if (N <= 0) return 0.0;
    cf = std::clamp(cf, 1e-6, 1.0 - 1e-6);
    if (e == 0) return N * (1 - std::pow(cf, 1.0 / N));
    if (e < 1) {
        double base = N * (1 - std::pow(cf, 1.0 / N));
        return base + e * (pessimistic_extra_errors(N, 1.0, cf) - base);
    }
    if (e + 0.5 >= N) return std::max(N - e, 0.0);
    double z = normal_quantile(1.0 - cf);
    double f = (e + 0.5) / N;
    double r = (f + z * z / (2 * N) +
                z * std::sqrt(f / N - f * f / N + z * z / (4 * N * N))) /
               (1 + z * z / N);
    return r * N - e;
}

DecisionTree train_c45(const Dataset& ds, const TrainParams& params) {
    if (ds.instances.empty()) throw ModelError("cannot train on an empty dataset");
    if (params.min_leaf < 1) throw ModelError("min_leaf must be positive");

    Grower grower{ds, params, {}, {}};
    std::vector<int> rows(ds.instances.size());
    std::iota(rows.begin(), rows.end(), 0);
    int root = grower.grow(rows);
    grower.prune(root, params.confidence_factor);

    DecisionTree tree;
    tree.attribute_names = ds.feature_names();
    tree.root = grower.compact(root, tree.nodes);
    return tree;
}

}  // namespace spamtree

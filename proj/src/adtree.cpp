#include "spamtree/adtree.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace spamtree {

namespace {

// Shared sweep state: instances of one prediction node's coverage, visited in
// (value, row) order per attribute.
struct SortedAttr {
    std::vector<int> order;  // row indices sorted by attribute value, then row
};

std::vector<SortedAttr> sort_attributes(const Dataset& ds) {
    std::size_t n = ds.instances.size(), m = ds.feature_count();
    std::vector<SortedAttr> sorted(m);
    for (std::size_t a = 0; a < m; ++a) {
        auto& ord = sorted[a].order;
        ord.resize(n);
        for (std::size_t i = 0; i < n; ++i) ord[i] = static_cast<int>(i);
        std::sort(ord.begin(), ord.end(), [&](int i, int j) {
            double vi = ds.instances[i].values[a], vj = ds.instances[j].values[a];
            return vi != vj ? vi < vj : i < j;
        });
    }
    return sorted;
}

// Coverage masks per prediction node id (0 root, unit j -> 2j+1 / 2j+2).
std::vector<std::vector<char>> reach_masks(const ADTreeModel& model, const Dataset& ds) {
    std::size_t n = ds.instances.size();
    std::vector<std::vector<char>> masks(2 * model.units.size() + 1);
    masks[0].assign(n, 1);
    for (std::size_t j = 0; j < model.units.size(); ++j) {
        const SplitterUnit& u = model.units[j];
        const auto& par = masks[u.parent_node];
        auto& mt = masks[2 * j + 1];
        auto& mf = masks[2 * j + 2];
        mt.assign(n, 0);
        mf.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            if (par[i]) (ds.instances[i].values[u.attribute] <= u.threshold ? mt : mf)[i] = 1;
    }
    return masks;
}

void check_trainable(const Dataset& ds) {
    if (ds.instances.empty()) throw ModelError("cannot train on an empty dataset");
    std::size_t n1 = ds.count_of(1);
    if (n1 == 0 || n1 == ds.instances.size())
        throw ModelError("boosted training needs both classes present");
}

}  // namespace

double adtree_score(const ADTreeModel& model, const Instance& x) {
    if (x.values.size() != model.attribute_names.size())
        throw ModelError("instance has " + std::to_string(x.values.size()) +
                         " values, model expects " +
                         std::to_string(model.attribute_names.size()));
    double score = model.root_prediction;
    std::vector<char> reached(2 * model.units.size() + 1, 0);
    reached[0] = 1;
    for (std::size_t j = 0; j < model.units.size(); ++j) {
        const SplitterUnit& u = model.units[j];
        if (!reached[u.parent_node]) continue;
        if (x.values[u.attribute] <= u.threshold) {
            score += u.pred_true;
            reached[2 * j + 1] = 1;
        } else {
            score += u.pred_false;
            reached[2 * j + 2] = 1;
        }
    }
    return score;
}

ADTreeModel train_adtree(const Dataset& ds, int iterations) {
    check_trainable(ds);
    std::size_t n = ds.instances.size();
    auto sorted = sort_attributes(ds);

    ADTreeModel model;
    model.attribute_names = ds.feature_names();
    double wp = ds.count_of(1), wn = n - wp;
    model.root_prediction = 0.5 * std::log(wp / wn);

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = ds.instances[i].class_label == 1 ? 1.0 : -1.0;
        w[i] = std::exp(-y * model.root_prediction);
    }

    for (int it = 0; it < iterations; ++it) {
        auto masks = reach_masks(model, ds);
        double w_total = 0.0;
        for (double wi : w) w_total += wi;

        struct Best {
            double z;
            int pid, attr;
            double thr, pt, pf;
        };
        std::optional<Best> best;

        for (std::size_t pid = 0; pid < masks.size(); ++pid) {
            const auto& mask = masks[pid];
            double wp_tot = 0.0, wn_tot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask[i]) (ds.instances[i].class_label == 1 ? wp_tot : wn_tot) += w[i];
            double w_outside = w_total - wp_tot - wn_tot;

            for (std::size_t a = 0; a < ds.feature_count(); ++a) {
                double wp_l = 0.0, wn_l = 0.0;
                int prev = -1;
                for (int i : sorted[a].order) {
                    if (!mask[i]) continue;
                    if (prev >= 0) {
                        double pv = ds.instances[prev].values[a];
                        double cv = ds.instances[i].values[a];
                        if (pv != cv) {
                            double thr = (pv + cv) / 2;
                            double wpt = wp_l, wnt = wn_l;
                            double wpf = std::max(wp_tot - wp_l, 0.0);
                            double wnf = std::max(wn_tot - wn_l, 0.0);
                            double z = 2 * (std::sqrt(wpt * wnt) + std::sqrt(wpf * wnf)) +
                                       w_outside;
                            if (!best || z < best->z - 1e-12) {
                                double pt = 0.5 * std::log((wpt + 1) / (wnt + 1));
                                double pf = 0.5 * std::log((wpf + 1) / (wnf + 1));
                                best = Best{z, static_cast<int>(pid), static_cast<int>(a),
                                            thr, pt, pf};
                            }
                        }
                    }
                    (ds.instances[i].class_label == 1 ? wp_l : wn_l) += w[i];
                    prev = i;
                }
            }
        }

        if (!best) break;
        model.units.push_back(
            {best->pid, best->attr, best->thr, best->pt, best->pf});
        const auto& par = masks[best->pid];
        for (std::size_t i = 0; i < n; ++i) {
            if (!par[i]) continue;
            double y = ds.instances[i].class_label == 1 ? 1.0 : -1.0;
            double pred =
                ds.instances[i].values[best->attr] <= best->thr ? best->pt : best->pf;
            w[i] *= std::exp(-y * pred);
        }
    }
    return model;
}

ADTreeModel train_ladtree(const Dataset& ds, int iterations) {
    check_trainable(ds);
    std::size_t n = ds.instances.size();
    auto sorted = sort_attributes(ds);
    const double eps = 1e-6, z_max = 4.0;

    ADTreeModel model;
    model.attribute_names = ds.feature_names();
    double n1 = ds.count_of(1), n0 = n - n1;
    model.root_prediction = 0.5 * std::log(n1 / n0);

    std::vector<double> F(n, model.root_prediction), z(n), w(n);

    for (int it = 0; it < iterations; ++it) {
        auto masks = reach_masks(model, ds);
        for (std::size_t i = 0; i < n; ++i) {
            double f = F[i];
            // sigmoid of 2f, computed on the stable side
            double p = f >= 0 ? 1.0 / (1.0 + std::exp(-2 * f))
                              : std::exp(2 * f) / (1.0 + std::exp(2 * f));
            p = std::clamp(p, eps, 1.0 - eps);
            double y = ds.instances[i].class_label == 1 ? 1.0 : 0.0;
            double zi = (y - p) / (p * (1 - p));
            zi = std::clamp(zi, -z_max, z_max);
            z[i] = zi;
            w[i] = (y - p) / zi;  // equals p(1-p) whenever zi is untruncated
        }
        double sse_all = 0.0;
        for (std::size_t i = 0; i < n; ++i) sse_all += w[i] * z[i] * z[i];

        struct Best {
            double sse;
            int pid, attr;
            double thr, vt, vf;
        };
        std::optional<Best> best;

        for (std::size_t pid = 0; pid < masks.size(); ++pid) {
            const auto& mask = masks[pid];
            double sw = 0.0, swz = 0.0, swzz = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask[i]) {
                    sw += w[i];
                    swz += w[i] * z[i];
                    swzz += w[i] * z[i] * z[i];
                }
            double sse_outside = sse_all - swzz;

            for (std::size_t a = 0; a < ds.feature_count(); ++a) {
                double lw = 0.0, lwz = 0.0, lwzz = 0.0;
                int prev = -1;
                for (int i : sorted[a].order) {
                    if (!mask[i]) continue;
                    if (prev >= 0) {
                        double pv = ds.instances[prev].values[a];
                        double cv = ds.instances[i].values[a];
                        if (pv != cv) {
                            double thr = (pv + cv) / 2;
                            double rw = sw - lw, rwz = swz - lwz, rwzz = swzz - lwzz;
                            double vt = lw > 0 ? lwz / lw : 0.0;
                            double vf = rw > 0 ? rwz / rw : 0.0;
                            double sse = (lwzz - lw * vt * vt) + (rwzz - rw * vf * vf) +
                                         sse_outside;
                            if (!best || sse < best->sse - 1e-12)
                                best = Best{sse, static_cast<int>(pid), static_cast<int>(a),
                                            thr, vt, vf};
                        }
                    }
                    lw += w[i];
                    lwz += w[i] * z[i];
                    lwzz += w[i] * z[i] * z[i];
                    prev = i;
                }
            }
        }

        if (!best) break;
        double pt = 0.5 * best->vt, pf = 0.5 * best->vf;
        model.units.push_back({best->pid, best->attr, best->thr, pt, pf});
        const auto& par = masks[best->pid];
        for (std::size_t i = 0; i < n; ++i) {
            if (!par[i]) continue;
            F[i] += ds.instances[i].values[best->attr] <= best->thr ? pt : pf;
        }
    }
    return model;
}

}  // namespace spamtree

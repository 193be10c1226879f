#include "amlgen/tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace amlgen {

namespace {

double gini(double w_pos, double w_total) {
    if (w_total <= 0.0) return 0.0;
    double p = w_pos / w_total;
    return 2.0 * p * (1.0 - p);
}

}  // namespace

int DecisionTree::grow(const Dataset& data, const std::vector<double>& w, std::vector<int>& idx,
                       int depth, const TreeParams& params) {
    double w_total = 0.0, w_pos = 0.0;
    for (int i : idx) {
        w_total += w[i];
        w_pos += w[i] * data.y[i];
    }
    int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[node_id].prob = w_total > 0.0 ? w_pos / w_total : 0.0;
    nodes_[node_id].weight = w_total;

    double impurity = gini(w_pos, w_total);
    if (depth >= params.max_depth || impurity == 0.0 ||
        static_cast<int>(idx.size()) < 2 * params.min_samples_leaf)
        return node_id;

    const int n_features = static_cast<int>(data.X[idx[0]].size());
    int best_feature = -1;
    double best_threshold = 0.0, best_gain = 1e-12;
    std::vector<int> order(idx);

    for (int f = 0; f < n_features; ++f) {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (data.X[a][f] != data.X[b][f]) return data.X[a][f] < data.X[b][f];
            return a < b;
        });
        double left_w = 0.0, left_pos = 0.0;
        int left_n = 0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            int r = order[i];
            left_w += w[r];
            left_pos += w[r] * data.y[r];
            ++left_n;
            double x0 = data.X[r][f], x1 = data.X[order[i + 1]][f];
            if (x0 == x1) continue;
            if (left_n < params.min_samples_leaf ||
                static_cast<int>(order.size()) - left_n < params.min_samples_leaf)
                continue;
            double right_w = w_total - left_w, right_pos = w_pos - left_pos;
            double child =
                (left_w * gini(left_pos, left_w) + right_w * gini(right_pos, right_w)) / w_total;
            double gain = impurity - child;
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = f;
                best_threshold = 0.5 * (x0 + x1);
            }
        }
    }
    if (best_feature < 0) return node_id;

    std::vector<int> left_idx, right_idx;
    for (int i : idx)
        (data.X[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
    if (left_idx.empty() || right_idx.empty()) return node_id;

    idx.clear();
    idx.shrink_to_fit();
    int left = grow(data, w, left_idx, depth + 1, params);
    int right = grow(data, w, right_idx, depth + 1, params);
    nodes_[node_id].leaf = false;
    nodes_[node_id].feature = best_feature;
    nodes_[node_id].threshold = best_threshold;
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    nodes_[node_id].decrease = best_gain * nodes_[node_id].weight;
    return node_id;
}

DecisionTree DecisionTree::train(const Dataset& data, const TreeParams& params) {
    if (data.X.size() != data.y.size() || data.X.empty())
        throw std::runtime_error("train_tree: empty or mismatched dataset");
    DecisionTree t;
    const std::size_t n = data.X.size();
    std::size_t n_pos = 0;
    for (int v : data.y) n_pos += v;

    std::vector<double> w(n, 1.0);
    if (params.balanced && n_pos > 0 && n_pos < n) {
        double w_pos = static_cast<double>(n) / (2.0 * n_pos);
        double w_neg = static_cast<double>(n) / (2.0 * (n - n_pos));
        for (std::size_t i = 0; i < n; ++i) w[i] = data.y[i] ? w_pos : w_neg;
    }
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    t.grow(data, w, idx, 0, params);
    t.root_weight_ = t.nodes_[0].weight;
    return t;
}

double DecisionTree::predict(const std::vector<double>& x) const {
    int cur = 0;
    while (!nodes_[cur].leaf)
        cur = x[nodes_[cur].feature] <= nodes_[cur].threshold ? nodes_[cur].left
                                                              : nodes_[cur].right;
    return nodes_[cur].prob;
}

std::vector<double> DecisionTree::importances(int n_features) const {
    std::vector<double> imp(n_features, 0.0);
    double total = 0.0;
    for (const auto& node : nodes_) {
        if (node.leaf) continue;
        imp[node.feature] += node.decrease;
        total += node.decrease;
    }
    if (total > 0.0)
        for (double& v : imp) v /= total;
    return imp;
}

TreeMetrics evaluate_metrics(const DecisionTree& tree, const Dataset& eval) {
    TreeMetrics m;
    std::vector<double> scores(eval.X.size());
    for (std::size_t i = 0; i < eval.X.size(); ++i) scores[i] = tree.predict(eval.X[i]);

    std::size_t n_pos = 0, n_neg = 0;
    for (int v : eval.y) (v ? n_pos : n_neg) += 1;
    if (n_neg == 0) throw std::runtime_error("evaluate_metrics: no negatives, FPR undefined");

    std::size_t fp = 0, tn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (eval.y[i]) continue;
        (scores[i] >= 0.5 ? fp : tn) += 1;
    }
    m.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);

    std::set<double, std::greater<>> thresholds(scores.begin(), scores.end());
    double sum_prec = 0.0;
    int n_points = 0;
    for (double tau : thresholds) {
        std::size_t tp = 0, fpc = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] < tau) continue;
            (eval.y[i] ? tp : fpc) += 1;
        }
        if (tp + fpc == 0) continue;
        double precision = static_cast<double>(tp) / static_cast<double>(tp + fpc);
        double recall = n_pos ? static_cast<double>(tp) / static_cast<double>(n_pos) : 0.0;
        m.pr_curve.emplace_back(recall, precision);
        if (recall > 0.6) {
            sum_prec += precision;
            ++n_points;
        }
    }
    m.p_at_r = n_points ? sum_prec / n_points : 0.0;
    return m;
}

}  // namespace amlgen

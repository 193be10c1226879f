#pragma once

#include <utility>
#include <vector>

namespace amlgen {

struct Dataset {
    std::vector<std::vector<double>> X;
    std::vector<int> y;  // 0 / 1
};

struct TreeParams {
    int max_depth = 5;
    int min_samples_leaf = 1;
    bool balanced = true;  // reweight classes to equal total weight
};

/// Greedy CART with Gini impurity. Deterministic: candidate splits are
/// midpoints of consecutive distinct sorted values, ties broken toward the
/// lowest feature index, then the lowest threshold.
class DecisionTree {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double prob = 0.0;      // weighted positive share at this node
        double weight = 0.0;    // total sample weight reaching the node
        double decrease = 0.0;  // weighted impurity decrease of the split
        bool leaf = true;
    };

    static DecisionTree train(const Dataset& data, const TreeParams& params);

    double predict(const std::vector<double>& x) const;

    /// Normalized Gini importances over n_features (all zero if no split).
    std::vector<double> importances(int n_features) const;

    bool trivial() const { return nodes_.size() <= 1; }
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    int grow(const Dataset& data, const std::vector<double>& w, std::vector<int>& idx, int depth,
             const TreeParams& params);

    std::vector<Node> nodes_;
    double root_weight_ = 0.0;
};

struct TreeMetrics {
    double fpr = 0.0;       // FP / (FP + TN) at the 0.5 threshold
    double p_at_r = 0.0;    // mean precision over PR points with recall > 0.6
    std::vector<std::pair<double, double>> pr_curve;  // (recall, precision)
};

/// Throws std::runtime_error when the evaluation set has no negatives.
TreeMetrics evaluate_metrics(const DecisionTree& tree, const Dataset& eval);

}  // namespace amlgen

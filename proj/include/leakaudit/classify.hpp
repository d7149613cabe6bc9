#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leakaudit/embed.hpp"

#include <json.hpp>

namespace leakaudit {

struct LogisticHyper {
    double learning_rate = 0.5;
    double l2_lambda = 1e-3;
    std::size_t max_epochs = 500;
    double grad_tolerance = 1e-4;  // L-infinity norm of the full gradient
    std::uint64_t seed = 0;        // recorded for provenance; training is seed-free
};

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    LogisticHyper hyper;
    std::size_t epochs_run = 0;
    double final_loss = 0.0;
};

// Full-batch gradient descent on mean log-loss + (l2_lambda/2)*||w||^2
// (bias unregularized), from zero initialization. Stops when the
// L-infinity norm of the gradient falls to grad_tolerance or at
// max_epochs. Throws TrainingError on non-finite loss.
LogisticModel train_logistic(const std::vector<EmbeddingVector>& X,
                             const std::vector<bool>& y, const LogisticHyper& hyper = {});

// sigmoid(w.x + b). Throws DimensionError on dim mismatch.
double predict_logistic(const LogisticModel& model, const EmbeddingVector& x);

// Threshold 0.5; a probability of exactly 0.5 classifies as false, the
// single tie rule used by every classifier here.
inline bool classify_at_half(double p) { return p > 0.5; }

// Max relative error between the analytic gradient of the regularized
// loss and central finite differences, over all weight components and the
// bias, at the given parameter point. epsilon in [1e-8, 1e-3].
double gradient_check(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                      const std::vector<double>& weights, double bias, double l2_lambda,
                      double epsilon);

struct TreeHyper {
    std::size_t max_depth = 8;
    std::size_t min_leaf = 5;
};

struct TreeNode {
    // Internal node when left >= 0: route x[feature] <= threshold to left.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double p_true = 0.0;  // leaf payload

    bool is_leaf() const { return left < 0; }
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    TreeHyper hyper;
};

// Greedy CART on Gini impurity. Candidate thresholds sit at class
// boundaries: midpoints between adjacent distinct feature values, except
// between two pure groups of the same class, where no optimum can sit.
// The best non-worsening split is taken (zero gain included, so
// xor-shaped labels are learnable), ties broken toward the lowest
// feature index, then lowest threshold, so training is deterministic
// given input order. Growth stops at purity, max_depth or min_leaf.
TreeModel train_tree(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                     const TreeHyper& hyper = {});

// Leaf p_true after routing. Throws DimensionError when an internal
// node's feature index is out of range for x.
double predict_tree(const TreeModel& model, const EmbeddingVector& x);

nlohmann::json to_json(const LogisticModel& model);
nlohmann::json to_json(const TreeModel& model);

}  // namespace leakaudit

#include "leakaudit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leakaudit/errors.hpp"

namespace leakaudit {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

void check_training_input(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y) {
    if (X.size() != y.size())
        throw UsageError("training: |X| != |y| (" + std::to_string(X.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    if (X.size() < 2) throw UsageError("training: need at least 2 points");
    for (const auto& x : X) {
        if (x.dim() != X.front().dim())
            throw DimensionError("training: inconsistent input dimensions");
    }
}

// Mean log-loss plus the ridge term; log-loss for label y at logit z is
// softplus(z) - y*z.
double regularized_loss(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                        const std::vector<double>& w, double b, double l2_lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = b;
        for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * X[i].values[k];
        loss += softplus(z) - (y[i] ? z : 0.0);
    }
    loss /= static_cast<double>(X.size());
    double reg = 0.0;
    for (double wk : w) reg += wk * wk;
    return loss + 0.5 * l2_lambda * reg;
}

}  // namespace

LogisticModel train_logistic(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                             const LogisticHyper& hyper) {
    check_training_input(X, y);
    if (hyper.learning_rate <= 0.0) throw UsageError("logistic: learning_rate must be > 0");
    if (hyper.l2_lambda < 0.0) throw UsageError("logistic: l2_lambda must be >= 0");
    if (hyper.max_epochs == 0) throw UsageError("logistic: max_epochs must be > 0");
    if (hyper.grad_tolerance <= 0.0) throw UsageError("logistic: grad_tolerance must be > 0");

    const std::size_t n = X.size();
    const std::size_t d = X.front().dim();
    const double inv_n = 1.0 / static_cast<double>(n);

    LogisticModel model;
    model.hyper = hyper;
    model.weights.assign(d, 0.0);

    // Descent is guaranteed when the step stays below the smoothness
    // bound 1 / (mean||x~||^2 / 4 + lambda) for the bias-augmented
    // inputs; checked so a hot learning rate that still descends passes
    // but an actual increase under the bound is a bug, not noise.
    double mean_sq = 0.0;
    for (const auto& x : X) {
        double s = 1.0;  // bias coordinate
        for (double v : x.values) s += v * v;
        mean_sq += s;
    }
    mean_sq *= inv_n;
    const bool guaranteed_descent =
        hyper.learning_rate <= 1.0 / (0.25 * mean_sq + hyper.l2_lambda);

    std::vector<double> grad_w(d, 0.0);
    double prev_loss = std::numeric_limits<double>::infinity();

    for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = model.bias;
            const auto& xv = X[i].values;
            for (std::size_t k = 0; k < d; ++k) z += model.weights[k] * xv[k];
            const double r = sigmoid(z) - (y[i] ? 1.0 : 0.0);
            for (std::size_t k = 0; k < d; ++k) grad_w[k] += r * xv[k];
            grad_b += r;
            loss += softplus(z) - (y[i] ? z : 0.0);
        }
        loss *= inv_n;
        double reg = 0.0;
        double linf = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            grad_w[k] = grad_w[k] * inv_n + hyper.l2_lambda * model.weights[k];
            reg += model.weights[k] * model.weights[k];
            linf = std::max(linf, std::abs(grad_w[k]));
        }
        grad_b *= inv_n;
        linf = std::max(linf, std::abs(grad_b));
        loss += 0.5 * hyper.l2_lambda * reg;

        if (!std::isfinite(loss))
            throw TrainingError("logistic: loss diverged (non-finite); lower the learning rate");
        if (guaranteed_descent && loss > prev_loss + 1e-12)
            throw TrainingError("logistic: loss increased under the smoothness bound");
        prev_loss = loss;
        model.final_loss = loss;
        model.epochs_run = epoch;

        if (linf <= hyper.grad_tolerance) return model;

        for (std::size_t k = 0; k < d; ++k) model.weights[k] -= hyper.learning_rate * grad_w[k];
        model.bias -= hyper.learning_rate * grad_b;
        model.epochs_run = epoch + 1;
    }
    model.final_loss = regularized_loss(X, y, model.weights, model.bias, hyper.l2_lambda);
    if (!std::isfinite(model.final_loss))
        throw TrainingError("logistic: loss diverged (non-finite); lower the learning rate");
    return model;
}

double predict_logistic(const LogisticModel& model, const EmbeddingVector& x) {
    if (x.dim() != model.weights.size())
        throw DimensionError("predict: input dim " + std::to_string(x.dim()) +
                             " != model dim " + std::to_string(model.weights.size()));
    double z = model.bias;
    for (std::size_t k = 0; k < model.weights.size(); ++k) z += model.weights[k] * x.values[k];
    return sigmoid(z);
}

double gradient_check(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                      const std::vector<double>& weights, double bias, double l2_lambda,
                      double epsilon) {
    check_training_input(X, y);
    if (!(epsilon >= 1e-8 && epsilon <= 1e-3))
        throw UsageError("gradient_check: epsilon must be in [1e-8, 1e-3]");
    if (weights.size() != X.front().dim())
        throw DimensionError("gradient_check: weight dim != input dim");

    const std::size_t n = X.size();
    const std::size_t d = weights.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> analytic(d + 1, 0.0);  // last slot is the bias
    for (std::size_t i = 0; i < n; ++i) {
        double z = bias;
        for (std::size_t k = 0; k < d; ++k) z += weights[k] * X[i].values[k];
        const double r = sigmoid(z) - (y[i] ? 1.0 : 0.0);
        for (std::size_t k = 0; k < d; ++k) analytic[k] += r * X[i].values[k];
        analytic[d] += r;
    }
    for (std::size_t k = 0; k < d; ++k) analytic[k] = analytic[k] * inv_n + l2_lambda * weights[k];
    analytic[d] *= inv_n;

    std::vector<double> w = weights;
    double max_rel = 0.0;
    for (std::size_t k = 0; k <= d; ++k) {
        double* slot = (k < d) ? &w[k] : &bias;
        const double saved = *slot;
        *slot = saved + epsilon;
        const double up = regularized_loss(X, y, w, bias, l2_lambda);
        *slot = saved - epsilon;
        const double down = regularized_loss(X, y, w, bias, l2_lambda);
        *slot = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double rel =
            std::abs(analytic[k] - numeric) / std::max(1.0, std::abs(analytic[k]) + std::abs(numeric));
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

namespace {

double gini(std::size_t n_true, std::size_t n) {
    const double pt = static_cast<double>(n_true) / static_cast<double>(n);
    const double pf = 1.0 - pt;
    return 1.0 - pt * pt - pf * pf;
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

// Distinct feature values with per-value label counts, ascending.
struct ValueGroup {
    double value;
    std::size_t count;
    std::size_t count_true;
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                const TreeHyper& hyper)
        : X_(X), y_(y), hyper_(hyper) {}

    TreeModel build() {
        TreeModel model;
        model.hyper = hyper_;
        std::vector<std::size_t> all(X_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        grow(model.nodes, std::move(all), 0);
        return model;
    }

private:
    int grow(std::vector<TreeNode>& nodes, std::vector<std::size_t> idx, std::size_t depth) {
        const std::size_t n = idx.size();
        std::size_t n_true = 0;
        for (std::size_t i : idx) n_true += y_[i] ? 1 : 0;

        const int self = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[self].p_true = static_cast<double>(n_true) / static_cast<double>(n);

        const bool pure = (n_true == 0 || n_true == n);
        if (pure || depth >= hyper_.max_depth || n < 2 * hyper_.min_leaf) return self;

        const SplitChoice split = best_split(idx, n_true);
        if (!split.found) return self;

        std::vector<std::size_t> left_idx;
        std::vector<std::size_t> right_idx;
        for (std::size_t i : idx) {
            (X_[i].values[split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        nodes[self].feature = static_cast<int>(split.feature);
        nodes[self].threshold = split.threshold;
        const int left = grow(nodes, std::move(left_idx), depth + 1);
        nodes[self].left = left;
        const int right = grow(nodes, std::move(right_idx), depth + 1);
        nodes[self].right = right;
        return self;
    }

    SplitChoice best_split(const std::vector<std::size_t>& idx, std::size_t n_true) const {
        const std::size_t n = idx.size();
        const std::size_t d = X_.front().dim();
        const double parent = gini(n_true, n);

        SplitChoice best;
        std::vector<std::pair<double, bool>> column(n);
        std::vector<ValueGroup> groups;
        for (std::size_t f = 0; f < d; ++f) {
            for (std::size_t i = 0; i < n; ++i) {
                column[i] = {X_[idx[i]].values[f], y_[idx[i]]};
            }
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (column.front().first == column.back().first) continue;

            groups.clear();
            for (const auto& [v, label] : column) {
                if (groups.empty() || groups.back().value != v) groups.push_back({v, 0, 0});
                groups.back().count += 1;
                groups.back().count_true += label ? 1 : 0;
            }

            std::size_t left_n = 0;
            std::size_t left_true = 0;
            for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
                left_n += groups[g].count;
                left_true += groups[g].count_true;

                // Only class boundaries can host the best split: between
                // two same-class pure groups the impurity cannot improve.
                const auto& a = groups[g];
                const auto& b = groups[g + 1];
                const bool a_pure = (a.count_true == 0 || a.count_true == a.count);
                const bool b_pure = (b.count_true == 0 || b.count_true == b.count);
                if (a_pure && b_pure && (a.count_true > 0) == (b.count_true > 0)) continue;

                const std::size_t right_n = n - left_n;
                if (left_n < hyper_.min_leaf || right_n < hyper_.min_leaf) continue;
                const std::size_t right_true = n_true - left_true;

                const double weighted =
                    (static_cast<double>(left_n) * gini(left_true, left_n) +
                     static_cast<double>(right_n) * gini(right_true, right_n)) /
                    static_cast<double>(n);
                // Non-worsening splits are taken even at zero gain: an
                // impure node keeps splitting until purity, max_depth or
                // min_leaf stops it. A strict-improvement rule would make
                // xor-shaped labels unlearnable (the first cut is always
                // zero-gain).
                if (weighted > parent) continue;
                if (!best.found || weighted < best.weighted_gini) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = 0.5 * (a.value + b.value);
                    best.weighted_gini = weighted;
                }
                // On exact ties the earlier candidate wins, which is the
                // lowest feature index, then the lowest threshold.
            }
        }
        return best;
    }

    const std::vector<EmbeddingVector>& X_;
    const std::vector<bool>& y_;
    TreeHyper hyper_;
};

}  // namespace

TreeModel train_tree(const std::vector<EmbeddingVector>& X, const std::vector<bool>& y,
                     const TreeHyper& hyper) {
    check_training_input(X, y);
    if (hyper.min_leaf == 0) throw UsageError("tree: min_leaf must be > 0");
    return TreeBuilder(X, y, hyper).build();
}

double predict_tree(const TreeModel& model, const EmbeddingVector& x) {
    if (model.nodes.empty()) throw UsageError("predict: empty tree");
    int at = 0;
    while (!model.nodes[at].is_leaf()) {
        const TreeNode& node = model.nodes[at];
        if (static_cast<std::size_t>(node.feature) >= x.dim())
            throw DimensionError("predict: tree uses feature " + std::to_string(node.feature) +
                                 " but input has dim " + std::to_string(x.dim()));
        at = (x.values[node.feature] <= node.threshold) ? node.left : node.right;
    }
    return model.nodes[at].p_true;
}

nlohmann::json to_json(const LogisticModel& model) {
    nlohmann::json j;
    j["type"] = "logistic";
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["epochs_run"] = model.epochs_run;
    j["final_loss"] = model.final_loss;
    j["hyper"] = {{"learning_rate", model.hyper.learning_rate},
                  {"l2_lambda", model.hyper.l2_lambda},
                  {"max_epochs", model.hyper.max_epochs},
                  {"grad_tolerance", model.hyper.grad_tolerance},
                  {"seed", model.hyper.seed}};
    return j;
}

nlohmann::json to_json(const TreeModel& model) {
    nlohmann::json j;
    j["type"] = "tree";
    j["hyper"] = {{"max_depth", model.hyper.max_depth}, {"min_leaf", model.hyper.min_leaf}};
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : model.nodes) {
        if (node.is_leaf()) {
            nodes.push_back({{"p_true", node.p_true}});
        } else {
            nodes.push_back({{"feature", node.feature},
                             {"threshold", node.threshold},
                             {"left", node.left},
                             {"right", node.right}});
        }
    }
    j["nodes"] = std::move(nodes);
    return j;
}

}  // namespace leakaudit

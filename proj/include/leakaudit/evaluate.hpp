#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leakaudit/classify.hpp"
#include "leakaudit/cohort.hpp"
#include "leakaudit/embed.hpp"

#include <json.hpp>

namespace leakaudit {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
};

// Throws UsageError on length mismatch or empty inputs. "true" is the
// positive class.
ConfusionMatrix confusion(const std::vector<bool>& predictions, const std::vector<bool>& truth);

double accuracy(const ConfusionMatrix& cm);

// Per-class F1 with the 0/0 -> 0 convention, needed so the constant
// baseline scores 0 on the class it never predicts.
double f1_true(const ConfusionMatrix& cm);
double f1_false(const ConfusionMatrix& cm);

// Unweighted mean of the two class F1 scores.
double macro_f1(const ConfusionMatrix& cm);

// Majority training label; an exact tie yields false.
bool naive_baseline(const std::vector<bool>& train_labels);

enum class ProbeKind { logistic, tree };

std::string_view probe_name(ProbeKind kind);

struct ProbeHyper {
    LogisticHyper logistic;
    TreeHyper tree;
};

struct EvaluationResult {
    std::string subreddit;
    Trait trait = Trait::is_female;
    ProbeKind probe = ProbeKind::logistic;
    double accuracy = 0.0;
    double f1_true = 0.0;
    double f1_false = 0.0;
    double macro_f1 = 0.0;
    double baseline_macro_f1 = 0.0;
    double macro_f1_lift = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::uint64_t seed = 0;
};

// Trains the probe on the cohort's train side and scores probe and
// constant-majority baseline on the identical test set, so the lift is a
// paired comparison. Embedding and training errors propagate.
EvaluationResult evaluate_pairing(const Cohort& cohort, const CommentEmbedder& embedder,
                                  ProbeKind probe, const ProbeHyper& hyper, std::uint64_t seed);

// One JSON object per result, for JSONL output.
nlohmann::json to_json(const EvaluationResult& r);
EvaluationResult evaluation_from_json(const nlohmann::json& j);

}  // namespace leakaudit

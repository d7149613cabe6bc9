#include "leakaudit/evaluate.hpp"

#include "leakaudit/errors.hpp"

namespace leakaudit {

ConfusionMatrix confusion(const std::vector<bool>& predictions, const std::vector<bool>& truth) {
    if (predictions.size() != truth.size())
        throw UsageError("confusion: length mismatch (" + std::to_string(predictions.size()) +
                         " vs " + std::to_string(truth.size()) + ")");
    if (predictions.empty()) throw UsageError("confusion: empty inputs");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            (predictions[i] ? cm.tp : cm.fn) += 1;
        } else {
            (predictions[i] ? cm.fp : cm.tn) += 1;
        }
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

namespace {

// F1 = 2tp / (2tp + fp + fn), with an empty denominator scoring 0.
double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
    const std::size_t denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

double f1_true(const ConfusionMatrix& cm) { return f1(cm.tp, cm.fp, cm.fn); }

// The false class's F1 swaps the roles: tn are its hits, fn its false
// positives (predicted false, actually true), fp its misses.
double f1_false(const ConfusionMatrix& cm) { return f1(cm.tn, cm.fn, cm.fp); }

double macro_f1(const ConfusionMatrix& cm) { return 0.5 * (f1_true(cm) + f1_false(cm)); }

bool naive_baseline(const std::vector<bool>& train_labels) {
    if (train_labels.empty()) throw UsageError("naive_baseline: empty labels");
    std::size_t n_true = 0;
    for (bool b : train_labels) n_true += b ? 1 : 0;
    return 2 * n_true > train_labels.size();  // exact tie -> false
}

std::string_view probe_name(ProbeKind kind) {
    return kind == ProbeKind::logistic ? "logistic" : "tree";
}

EvaluationResult evaluate_pairing(const Cohort& cohort, const CommentEmbedder& embedder,
                                  ProbeKind probe, const ProbeHyper& hyper, std::uint64_t seed) {
    std::vector<EmbeddingVector> train_x;
    std::vector<bool> train_y;
    std::vector<EmbeddingVector> test_x;
    std::vector<bool> test_y;
    for (std::size_t i = 0; i < cohort.members.size(); ++i) {
        EmbeddingVector v = embedder.embed_comment(cohort.members[i].comment);
        const bool label = cohort.label_of(i);
        if (cohort.side_of(i) == Side::train) {
            train_x.push_back(std::move(v));
            train_y.push_back(label);
        } else {
            test_x.push_back(std::move(v));
            test_y.push_back(label);
        }
    }

    std::vector<bool> predictions(test_x.size());
    if (probe == ProbeKind::logistic) {
        LogisticHyper lh = hyper.logistic;
        lh.seed = seed;
        const LogisticModel model = train_logistic(train_x, train_y, lh);
        for (std::size_t i = 0; i < test_x.size(); ++i)
            predictions[i] = classify_at_half(predict_logistic(model, test_x[i]));
    } else {
        const TreeModel model = train_tree(train_x, train_y, hyper.tree);
        for (std::size_t i = 0; i < test_x.size(); ++i)
            predictions[i] = classify_at_half(predict_tree(model, test_x[i]));
    }

    const bool majority = naive_baseline(train_y);
    const std::vector<bool> baseline_predictions(test_y.size(), majority);

    const ConfusionMatrix cm = confusion(predictions, test_y);
    const ConfusionMatrix baseline_cm = confusion(baseline_predictions, test_y);

    EvaluationResult r;
    r.subreddit = cohort.subreddit;
    r.trait = cohort.trait;
    r.probe = probe;
    r.accuracy = accuracy(cm);
    r.f1_true = f1_true(cm);
    r.f1_false = f1_false(cm);
    r.macro_f1 = macro_f1(cm);
    r.baseline_macro_f1 = macro_f1(baseline_cm);
    r.macro_f1_lift = r.macro_f1 - r.baseline_macro_f1;
    r.n_train = train_y.size();
    r.n_test = test_y.size();
    r.seed = seed;
    return r;
}

nlohmann::json to_json(const EvaluationResult& r) {
    return {{"pairing", {{"subreddit", r.subreddit}, {"trait", std::string(trait_name(r.trait))}}},
            {"probe", std::string(probe_name(r.probe))},
            {"accuracy", r.accuracy},
            {"f1_true", r.f1_true},
            {"f1_false", r.f1_false},
            {"macro_f1", r.macro_f1},
            {"baseline_macro_f1", r.baseline_macro_f1},
            {"macro_f1_lift", r.macro_f1_lift},
            {"n_train", r.n_train},
            {"n_test", r.n_test},
            {"seed", r.seed}};
}

EvaluationResult evaluation_from_json(const nlohmann::json& j) {
    EvaluationResult r;
    r.subreddit = j.at("pairing").at("subreddit").get<std::string>();
    const auto trait = trait_from_name(j.at("pairing").at("trait").get<std::string>());
    if (!trait) throw FormatError("unknown trait in evaluation record");
    r.trait = *trait;
    const std::string probe = j.at("probe").get<std::string>();
    if (probe == "logistic") {
        r.probe = ProbeKind::logistic;
    } else if (probe == "tree") {
        r.probe = ProbeKind::tree;
    } else {
        throw FormatError("unknown probe \"" + probe + "\" in evaluation record");
    }
    r.accuracy = j.at("accuracy").get<double>();
    r.f1_true = j.at("f1_true").get<double>();
    r.f1_false = j.at("f1_false").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.baseline_macro_f1 = j.at("baseline_macro_f1").get<double>();
    r.macro_f1_lift = j.at("macro_f1_lift").get<double>();
    r.n_train = j.at("n_train").get<std::size_t>();
    r.n_test = j.at("n_test").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

}  // namespace leakaudit

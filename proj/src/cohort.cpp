#include "leakaudit/cohort.hpp"

#include <algorithm>
#include <stdexcept>

#include "leakaudit/errors.hpp"
#include "leakaudit/rng.hpp"

namespace leakaudit {

void validate(const CohortSpec& spec) {
    if (spec.subreddit.empty()) throw UsageError("cohort spec: subreddit is empty");
    if (spec.min_per_class < 2) throw UsageError("cohort spec: min_per_class must be >= 2");
    if (spec.max_size < 2 * spec.min_per_class)
        throw UsageError("cohort spec: max_size must be >= 2 * min_per_class");
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
        throw UsageError("cohort spec: test_fraction must be in (0, 1)");
}

bool Cohort::label_of(std::size_t i) const {
    return members.at(i).traits.get(trait).value();
}

Side Cohort::side_of(std::size_t i) const {
    return split.at(members.at(i).comment.comment_id);
}

std::vector<std::string> Cohort::ids(Side side) const {
    std::vector<std::string> out;
    for (const auto& m : members) {
        if (split.at(m.comment.comment_id) == side) out.push_back(m.comment.comment_id);
    }
    return out;
}

namespace {

// Uniform sample of `take` indices, returned in ascending order so the
// cohort keeps the input's comment order.
std::vector<std::size_t> sample_indices(std::vector<std::size_t> pool, std::size_t take,
                                        Rng& rng) {
    rng.shuffle(pool);
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

Cohort build_cohort(const std::vector<LabeledComment>& labeled, const CohortSpec& spec) {
    validate(spec);

    const std::string sub_lower = to_lower(spec.subreddit);
    std::vector<std::size_t> true_idx;
    std::vector<std::size_t> false_idx;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        const LabeledComment& lc = labeled[i];
        if (to_lower(lc.comment.subreddit) != sub_lower) continue;
        const auto label = lc.traits.get(spec.trait);
        if (!label.has_value()) continue;
        (*label ? true_idx : false_idx).push_back(i);
    }

    if (true_idx.size() < spec.min_per_class || false_idx.size() < spec.min_per_class) {
        throw InsufficientClassError(
            "pairing (" + spec.subreddit + ", " + std::string(trait_name(spec.trait)) +
            "): class counts " + std::to_string(true_idx.size()) + " true / " +
            std::to_string(false_idx.size()) + " false, need " +
            std::to_string(spec.min_per_class) + " per class");
    }

    const std::size_t per_class =
        std::min({true_idx.size(), false_idx.size(), spec.max_size / 2});

    Rng rng(derive_seed(spec.seed, "cohort", sub_lower, trait_name(spec.trait)));
    true_idx = sample_indices(std::move(true_idx), per_class, rng);
    false_idx = sample_indices(std::move(false_idx), per_class, rng);

    std::vector<std::size_t> keep;
    keep.reserve(2 * per_class);
    keep.insert(keep.end(), true_idx.begin(), true_idx.end());
    keep.insert(keep.end(), false_idx.begin(), false_idx.end());
    std::sort(keep.begin(), keep.end());

    Cohort cohort;
    cohort.subreddit = spec.subreddit;
    cohort.trait = spec.trait;
    cohort.seed = spec.seed;
    cohort.n_true = per_class;
    cohort.n_false = per_class;
    cohort.members.reserve(keep.size());
    for (std::size_t i : keep) cohort.members.push_back(labeled[i]);

    const AuthorSplit assignment = split_by_author(cohort, spec.test_fraction, spec.seed);
    for (const auto& id : assignment.train_ids) cohort.split.emplace(id, Side::train);
    for (const auto& id : assignment.test_ids) cohort.split.emplace(id, Side::test);
    return cohort;
}

AuthorSplit split_by_author(const Cohort& cohort, double test_fraction, std::uint64_t seed) {
    if (cohort.members.empty()) throw UsageError("split_by_author: empty cohort");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw UsageError("split_by_author: test_fraction must be in (0, 1)");

    // Authors in first-appearance order, then shuffled; grouping by author
    // keeps any one writer's comments on a single side.
    std::vector<std::string> authors;
    std::unordered_map<std::string, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < cohort.members.size(); ++i) {
        const std::string& who = cohort.members[i].comment.username;
        auto [it, inserted] = by_author.try_emplace(who);
        if (inserted) authors.push_back(who);
        it->second.push_back(i);
    }

    Rng rng(derive_seed(seed, "split", to_lower(cohort.subreddit), trait_name(cohort.trait)));
    rng.shuffle(authors);

    const double want_test = test_fraction * static_cast<double>(cohort.members.size());
    std::vector<bool> in_test(cohort.members.size(), false);
    std::size_t test_count = 0;
    for (const std::string& who : authors) {
        if (static_cast<double>(test_count) >= want_test) break;
        for (std::size_t i : by_author.at(who)) in_test[i] = true;
        test_count += by_author.at(who).size();
    }

    AuthorSplit out;
    std::size_t true_train = 0, false_train = 0, true_test = 0, false_test = 0;
    for (std::size_t i = 0; i < cohort.members.size(); ++i) {
        const bool label = cohort.label_of(i);
        if (in_test[i]) {
            out.test_ids.push_back(cohort.members[i].comment.comment_id);
            (label ? true_test : false_test) += 1;
        } else {
            out.train_ids.push_back(cohort.members[i].comment.comment_id);
            (label ? true_train : false_train) += 1;
        }
    }
    if (true_train == 0 || false_train == 0 || true_test == 0 || false_test == 0) {
        throw DegenerateSplitError(
            "pairing (" + cohort.subreddit + ", " + std::string(trait_name(cohort.trait)) +
            "): author split left a side without both classes (train " +
            std::to_string(true_train) + "/" + std::to_string(false_train) + ", test " +
            std::to_string(true_test) + "/" + std::to_string(false_test) + ")");
    }
    return out;
}

nlohmann::json cohort_manifest(const Cohort& cohort) {
    nlohmann::json j;
    j["subreddit"] = cohort.subreddit;
    j["trait"] = std::string(trait_name(cohort.trait));
    j["seed"] = cohort.seed;
    j["n_true"] = cohort.n_true;
    j["n_false"] = cohort.n_false;
    j["train_ids"] = cohort.ids(Side::train);
    j["test_ids"] = cohort.ids(Side::test);
    return j;
}

}  // namespace leakaudit

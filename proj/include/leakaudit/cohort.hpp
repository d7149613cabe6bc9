#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "leakaudit/corpus.hpp"

#include <json.hpp>

namespace leakaudit {

struct CohortSpec {
    std::string subreddit;
    Trait trait = Trait::is_female;
    std::size_t max_size = 10000;    // cap on total comments (both classes)
    std::size_t min_per_class = 25;  // guard against skewed pairings
    double test_fraction = 0.25;
    std::uint64_t seed = 0;
};

// Throws UsageError when the spec breaks its own constraints
// (min_per_class >= 2, max_size >= 2*min_per_class, test_fraction in (0,1)).
void validate(const CohortSpec& spec);

enum class Side { train, test };

// A balanced set of labeled comments for one (subreddit, trait) pairing,
// with an author-disjoint train/test assignment.
struct Cohort {
    std::string subreddit;
    Trait trait = Trait::is_female;
    std::uint64_t seed = 0;
    std::vector<LabeledComment> members;  // input order preserved
    std::size_t n_true = 0;
    std::size_t n_false = 0;
    std::unordered_map<std::string, Side> split;  // comment_id -> side

    // Target-trait label of members[i]. Every member has it set.
    bool label_of(std::size_t i) const;
    Side side_of(std::size_t i) const;
    std::vector<std::string> ids(Side side) const;  // in member order
};

// Filters `labeled` to spec.subreddit (case-insensitive) and to comments
// whose author has the target trait set, then downsamples each class to
// min(minority count, max_size / 2) so the classes are exactly equal.
// Selection is uniform given the seed, and member order follows input
// order. The train/test assignment is author-disjoint (split_by_author).
//
// Throws InsufficientClassError when either class has fewer than
// spec.min_per_class comments before downsampling.
Cohort build_cohort(const std::vector<LabeledComment>& labeled, const CohortSpec& spec);

struct AuthorSplit {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

// Shuffles the cohort's authors by the derived seed and assigns them
// greedily to the test side until it holds at least
// test_fraction * |cohort| comments, so an author straddling the boundary
// overflows into test. Remaining authors go to train. No author appears
// on both sides.
//
// Throws DegenerateSplitError unless both sides end up with both classes.
AuthorSplit split_by_author(const Cohort& cohort, double test_fraction, std::uint64_t seed);

// {subreddit, trait, seed, n_true, n_false, train_ids, test_ids}
nlohmann::json cohort_manifest(const Cohort& cohort);

}  // namespace leakaudit

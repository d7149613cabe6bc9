#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leakaudit/cohort.hpp"
#include "leakaudit/corpus.hpp"
#include "leakaudit/evaluate.hpp"

#include <json.hpp>

namespace leakaudit {

struct SearchConfig {
    // Comments per class per stage, strictly ascending. A trailing 0
    // means "all available", the full evaluation stage.
    std::vector<std::size_t> stage_sizes = {500, 5000, 0};
    double promote_threshold = 0.05;  // minimum interim lift to advance
    std::size_t max_pairings = 10;    // promotion budget
    std::size_t min_per_class = 25;
    double test_fraction = 0.25;
    std::uint64_t seed = 0;
};

void validate(const SearchConfig& config);

struct Pairing {
    std::string subreddit;  // lowercased canonical form
    Trait trait = Trait::is_female;

    bool operator==(const Pairing&) const = default;
};

struct PairingCounts {
    std::size_t n_true = 0;
    std::size_t n_false = 0;
};

// Per-subreddit trait class counts, keyed by lowercased subreddit so the
// key order is already the enumeration order.
using CorpusSummary = std::map<std::string, std::array<PairingCounts, 7>>;

CorpusSummary summarize_corpus(const std::vector<LabeledComment>& labeled);

// All pairings whose both classes meet min_per_class, subreddits
// lexicographic, traits in their fixed order.
std::vector<Pairing> enumerate_pairings(const CorpusSummary& summary,
                                        std::size_t min_per_class);

enum class SearchStatus { promoted, pruned, skipped_insufficient };

std::string_view status_name(SearchStatus status);

struct PairingOutcome {
    Pairing pairing;
    std::size_t stage_reached = 0;       // stages actually evaluated
    std::vector<double> interim_lifts;   // one per evaluated stage
    SearchStatus status = SearchStatus::pruned;
    // Present iff promoted. Both probes are kept: screening averages
    // them, but the final record preserves each probe's own numbers.
    std::optional<EvaluationResult> final_logistic;
    std::optional<EvaluationResult> final_tree;
};

nlohmann::json to_json(const PairingOutcome& outcome);
PairingOutcome outcome_from_json(const nlohmann::json& j);

// Screens candidates in order on nested per-pairing samples, promoting a
// pairing only while its interim lift (mean of the two probes) stays at
// or above promote_threshold through the final full stage. Stops issuing
// candidates once max_pairings have been promoted.
//
// Outcomes are independent of `workers`: candidates are screened in
// fixed-size waves whose results are committed in candidate order, and
// speculative work past the budget-filling promotion is discarded.
//
// When trace_path is non-empty, one JSONL line is appended per outcome;
// pairings already present in an existing trace are not re-evaluated
// (resume), and their recorded outcomes lead the returned list.
std::vector<PairingOutcome> run_search(const std::vector<LabeledComment>& corpus,
                                       const SearchConfig& config,
                                       const CommentEmbedder& embedder,
                                       const ProbeHyper& probes, std::size_t workers = 1,
                                       const std::string& trace_path = {});

}  // namespace leakaudit

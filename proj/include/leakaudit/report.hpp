#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leakaudit/evaluate.hpp"

#include <json.hpp>

namespace leakaudit {

// One (subreddit, trait) pairing's aggregate lift: probe means are taken
// first and then averaged, so an uneven probe record count cannot weight
// the result toward one probe.
struct PairingLift {
    std::string subreddit;  // lowercased
    Trait trait = Trait::is_female;
    double lift = 0.0;
    std::size_t n_records = 0;
};

std::vector<PairingLift> pairing_lifts(const std::vector<EvaluationResult>& results);

struct TraitSummaryRow {
    Trait trait = Trait::is_female;
    double mean_lift = 0.0;
    std::size_t n_pairings = 0;
};

// Mean pairing lift per trait, sorted by mean descending (stable, so
// equal means keep the fixed trait order).
std::vector<TraitSummaryRow> trait_summary(const std::vector<EvaluationResult>& results);

struct RankingRow {
    std::string subreddit;
    double mean_lift = 0.0;
    std::size_t n_traits = 0;
    bool top = false;  // top group (strongest means) vs bottom group
};

// The top_k strongest and bottom_k weakest subreddits by mean lift, both
// groups in descending order, ties broken by name. A subreddit never
// appears twice even when the groups would overlap.
std::vector<RankingRow> subreddit_ranking(const std::vector<EvaluationResult>& results,
                                          std::size_t top_k, std::size_t bottom_k);

struct VarianceRow {
    std::string subreddit;
    double mean_lift = 0.0;
    double variance_lift = 0.0;  // population variance of per-trait lifts
    std::size_t n_traits = 0;
};

struct VarianceSummary {
    std::vector<VarianceRow> rows;  // variance descending, top_k (0 = all)
    std::size_t excluded_single_trait = 0;
};

VarianceSummary subreddit_variance(const std::vector<EvaluationResult>& results,
                                   std::size_t top_k);

struct PairwiseTable {
    std::string subreddit_a;
    std::string subreddit_b;
    std::vector<Trait> traits;
    // cells[i] = {lift in a, lift in b} for traits[i]; absent -> nullopt.
    std::vector<std::array<std::optional<double>, 2>> cells;
};

// Lift grid for two subreddits over the given traits (empty list = all
// seven). A pairing missing on one side yields a null cell, never a zero.
PairwiseTable pairwise_table(const std::vector<EvaluationResult>& results,
                             const std::string& subreddit_a, const std::string& subreddit_b,
                             const std::vector<Trait>& traits = {});

struct ChartRow {
    std::string label;
    double value = 0.0;
    bool highlight = true;  // true -> green bar, false -> red bar
};

// Dependency-free horizontal bar chart; byte-identical for equal input.
// Throws UsageError on empty rows.
void render_bar_chart(const std::vector<ChartRow>& rows, const std::string& title,
                      const std::string& path);

struct ReportSummary {
    double mean_lift = 0.0;
    PairingLift max_pairing;
    PairingLift min_pairing;
    std::size_t n_pairings = 0;
};

ReportSummary summarize(const std::vector<EvaluationResult>& results);

struct ReportOptions {
    std::size_t top_k = 10;
    std::size_t bottom_k = 10;
    std::size_t variance_top_k = 10;
    std::optional<std::pair<std::string, std::string>> pairwise;
};

// Writes trait_summary, subreddit_ranking and subreddit_variance as
// .csv/.json/.svg under out_dir, plus summary.json and, when requested,
// pairwise_<a>_<b>.csv/.json. Returns the echoed summary statistics.
ReportSummary write_reports(const std::vector<EvaluationResult>& results,
                            const std::string& out_dir, const ReportOptions& options = {});

// EvaluationResult JSONL file -> records, in file order.
std::vector<EvaluationResult> read_results_jsonl(const std::string& path);
void write_results_jsonl(const std::vector<EvaluationResult>& results,
                         const std::string& path);

// Shortest text that parses back to exactly this double.
std::string fmt_double(double v);

}  // namespace leakaudit

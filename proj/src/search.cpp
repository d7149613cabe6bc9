#include "leakaudit/search.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <thread>

#include "leakaudit/errors.hpp"
#include "leakaudit/rng.hpp"

namespace leakaudit {

void validate(const SearchConfig& config) {
    if (config.stage_sizes.empty()) throw UsageError("search: stage_sizes is empty");
    for (std::size_t i = 0; i < config.stage_sizes.size(); ++i) {
        const std::size_t s = config.stage_sizes[i];
        if (s == 0 && i + 1 != config.stage_sizes.size())
            throw UsageError("search: 0 (full) is only valid as the last stage size");
        if (s != 0 && i > 0 && config.stage_sizes[i - 1] != 0 &&
            s <= config.stage_sizes[i - 1])
            throw UsageError("search: stage_sizes must be strictly ascending");
    }
    if (config.promote_threshold < 0.0)
        throw UsageError("search: promote_threshold must be >= 0");
    if (config.max_pairings == 0) throw UsageError("search: max_pairings must be > 0");
    if (config.min_per_class < 2) throw UsageError("search: min_per_class must be >= 2");
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
        throw UsageError("search: test_fraction must be in (0, 1)");
}

CorpusSummary summarize_corpus(const std::vector<LabeledComment>& labeled) {
    CorpusSummary summary;
    for (const auto& lc : labeled) {
        auto& per_trait = summary[to_lower(lc.comment.subreddit)];
        for (Trait t : kAllTraits) {
            const auto label = lc.traits.get(t);
            if (!label.has_value()) continue;
            auto& counts = per_trait[static_cast<std::size_t>(t)];
            (*label ? counts.n_true : counts.n_false) += 1;
        }
    }
    return summary;
}

std::vector<Pairing> enumerate_pairings(const CorpusSummary& summary,
                                        std::size_t min_per_class) {
    std::vector<Pairing> out;
    for (const auto& [subreddit, per_trait] : summary) {
        for (Trait t : kAllTraits) {
            const auto& counts = per_trait[static_cast<std::size_t>(t)];
            if (counts.n_true >= min_per_class && counts.n_false >= min_per_class)
                out.push_back({subreddit, t});
        }
    }
    return out;
}

std::string_view status_name(SearchStatus status) {
    switch (status) {
        case SearchStatus::promoted: return "promoted";
        case SearchStatus::pruned: return "pruned";
        case SearchStatus::skipped_insufficient: return "skipped_insufficient";
    }
    throw UsageError("unknown search status");
}

nlohmann::json to_json(const PairingOutcome& outcome) {
    nlohmann::json j;
    j["pairing"] = {{"subreddit", outcome.pairing.subreddit},
                    {"trait", std::string(trait_name(outcome.pairing.trait))}};
    j["stage_reached"] = outcome.stage_reached;
    j["interim_lifts"] = outcome.interim_lifts;
    j["status"] = std::string(status_name(outcome.status));
    if (outcome.status == SearchStatus::promoted) {
        j["final"] = {{"logistic", to_json(*outcome.final_logistic)},
                      {"tree", to_json(*outcome.final_tree)}};
    } else {
        j["final"] = nullptr;
    }
    return j;
}

PairingOutcome outcome_from_json(const nlohmann::json& j) {
    PairingOutcome o;
    o.pairing.subreddit = j.at("pairing").at("subreddit").get<std::string>();
    const auto trait = trait_from_name(j.at("pairing").at("trait").get<std::string>());
    if (!trait) throw FormatError("unknown trait in search trace");
    o.pairing.trait = *trait;
    o.stage_reached = j.at("stage_reached").get<std::size_t>();
    o.interim_lifts = j.at("interim_lifts").get<std::vector<double>>();
    const std::string status = j.at("status").get<std::string>();
    if (status == "promoted") {
        o.status = SearchStatus::promoted;
    } else if (status == "pruned") {
        o.status = SearchStatus::pruned;
    } else if (status == "skipped_insufficient") {
        o.status = SearchStatus::skipped_insufficient;
    } else {
        throw FormatError("unknown status \"" + status + "\" in search trace");
    }
    if (o.status == SearchStatus::promoted) {
        o.final_logistic = evaluation_from_json(j.at("final").at("logistic"));
        o.final_tree = evaluation_from_json(j.at("final").at("tree"));
    }
    return o;
}

namespace {

// Class index lists for one pairing, shuffled once by the pairing seed so
// every stage's sample is a prefix of the next stage's (nested).
struct PairingPool {
    std::vector<std::size_t> true_idx;
    std::vector<std::size_t> false_idx;
};

PairingPool pool_for(const std::vector<LabeledComment>& corpus, const Pairing& pairing,
                     std::uint64_t pairing_seed) {
    PairingPool pool;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (to_lower(corpus[i].comment.subreddit) != pairing.subreddit) continue;
        const auto label = corpus[i].traits.get(pairing.trait);
        if (!label.has_value()) continue;
        (*label ? pool.true_idx : pool.false_idx).push_back(i);
    }
    Rng rng(pairing_seed);
    rng.shuffle(pool.true_idx);
    rng.shuffle(pool.false_idx);
    return pool;
}

Cohort stage_cohort(const std::vector<LabeledComment>& corpus, const Pairing& pairing,
                    const PairingPool& pool, std::size_t per_class, double test_fraction,
                    std::uint64_t pairing_seed) {
    std::vector<std::size_t> keep(pool.true_idx.begin(),
                                  pool.true_idx.begin() + static_cast<std::ptrdiff_t>(per_class));
    keep.insert(keep.end(), pool.false_idx.begin(),
                pool.false_idx.begin() + static_cast<std::ptrdiff_t>(per_class));
    std::sort(keep.begin(), keep.end());

    Cohort cohort;
    cohort.subreddit = pairing.subreddit;
    cohort.trait = pairing.trait;
    cohort.seed = pairing_seed;
    cohort.n_true = per_class;
    cohort.n_false = per_class;
    cohort.members.reserve(keep.size());
    for (std::size_t i : keep) cohort.members.push_back(corpus[i]);

    const AuthorSplit split = split_by_author(cohort, test_fraction, pairing_seed);
    for (const auto& id : split.train_ids) cohort.split.emplace(id, Side::train);
    for (const auto& id : split.test_ids) cohort.split.emplace(id, Side::test);
    return cohort;
}

PairingOutcome screen_pairing(const std::vector<LabeledComment>& corpus,
                              const SearchConfig& config, const CommentEmbedder& embedder,
                              const ProbeHyper& probes, const Pairing& pairing) {
    PairingOutcome outcome;
    outcome.pairing = pairing;

    const std::uint64_t pairing_seed =
        derive_seed(config.seed, "search", pairing.subreddit, trait_name(pairing.trait));
    const PairingPool pool = pool_for(corpus, pairing, pairing_seed);
    const std::size_t available = std::min(pool.true_idx.size(), pool.false_idx.size());

    if (available < config.min_per_class) {
        outcome.status = SearchStatus::skipped_insufficient;
        return outcome;
    }

    std::size_t prev_per_class = 0;
    double prev_lift = 0.0;
    EvaluationResult prev_logistic;
    EvaluationResult prev_tree;
    try {
        for (std::size_t s = 0; s < config.stage_sizes.size(); ++s) {
            const std::size_t want = config.stage_sizes[s];
            const std::size_t per_class = (want == 0) ? available : std::min(want, available);

            // A stage that cannot grow past the previous one would see the
            // identical cohort; reuse its numbers instead of recomputing.
            if (s == 0 || per_class != prev_per_class) {
                const Cohort cohort = stage_cohort(corpus, pairing, pool, per_class,
                                                   config.test_fraction, pairing_seed);
                prev_logistic = evaluate_pairing(cohort, embedder, ProbeKind::logistic,
                                                 probes, pairing_seed);
                prev_tree =
                    evaluate_pairing(cohort, embedder, ProbeKind::tree, probes, pairing_seed);
                prev_lift = 0.5 * (prev_logistic.macro_f1_lift + prev_tree.macro_f1_lift);
                prev_per_class = per_class;
            }
            outcome.interim_lifts.push_back(prev_lift);
            outcome.stage_reached = s + 1;
            if (prev_lift < config.promote_threshold) {
                outcome.status = SearchStatus::pruned;
                return outcome;
            }
        }
    } catch (const InsufficientClassError&) {
        outcome.status = SearchStatus::skipped_insufficient;
        outcome.interim_lifts.clear();
        outcome.stage_reached = 0;
        return outcome;
    } catch (const DegenerateSplitError&) {
        // Too few authors to form a usable split at some stage; treat the
        // pairing as unevaluable rather than failing the whole search.
        outcome.status = SearchStatus::skipped_insufficient;
        outcome.interim_lifts.clear();
        outcome.stage_reached = 0;
        return outcome;
    }

    outcome.status = SearchStatus::promoted;
    outcome.final_logistic = std::move(prev_logistic);
    outcome.final_tree = std::move(prev_tree);
    return outcome;
}

}  // namespace

std::vector<PairingOutcome> run_search(const std::vector<LabeledComment>& corpus,
                                       const SearchConfig& config,
                                       const CommentEmbedder& embedder,
                                       const ProbeHyper& probes, std::size_t workers,
                                       const std::string& trace_path) {
    validate(config);
    if (workers == 0) throw UsageError("search: workers must be > 0");

    std::vector<PairingOutcome> outcomes;
    std::size_t promoted = 0;

    // Resume: anything already in the trace is a committed outcome.
    if (!trace_path.empty()) {
        std::ifstream in(trace_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                outcomes.push_back(outcome_from_json(nlohmann::json::parse(line)));
            } catch (const nlohmann::json::exception&) {
                throw FormatError(trace_path + ": unreadable search trace line");
            }
            if (outcomes.back().status == SearchStatus::promoted) ++promoted;
        }
    }

    const CorpusSummary summary = summarize_corpus(corpus);
    std::vector<Pairing> candidates = enumerate_pairings(summary, config.min_per_class);
    std::erase_if(candidates, [&](const Pairing& p) {
        return std::any_of(outcomes.begin(), outcomes.end(),
                           [&](const PairingOutcome& o) { return o.pairing == p; });
    });

    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path, std::ios::binary | std::ios::app);
        if (!trace) throw IoError("cannot write search trace: " + trace_path);
    }
    const auto commit = [&](PairingOutcome&& outcome) {
        if (trace.is_open()) trace << to_json(outcome).dump() << "\n";
        if (outcome.status == SearchStatus::promoted) ++promoted;
        outcomes.push_back(std::move(outcome));
    };

    // Waves of speculative screening: candidate k's outcome never depends
    // on any other candidate, so a wave can run in parallel and still be
    // committed strictly in candidate order. Work past the promotion that
    // exhausts the budget is thrown away, which is exactly the prefix a
    // single worker would have produced.
    std::size_t at = 0;
    while (at < candidates.size() && promoted < config.max_pairings) {
        const std::size_t wave = std::min(workers, candidates.size() - at);
        std::vector<PairingOutcome> results(wave);
        std::vector<std::exception_ptr> failures(wave);
        if (wave == 1) {
            results[0] = screen_pairing(corpus, config, embedder, probes, candidates[at]);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(wave);
            for (std::size_t w = 0; w < wave; ++w) {
                threads.emplace_back([&, w] {
                    try {
                        results[w] =
                            screen_pairing(corpus, config, embedder, probes, candidates[at + w]);
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) t.join();
        }
        for (std::size_t w = 0; w < wave; ++w) {
            if (failures[w]) std::rethrow_exception(failures[w]);
            commit(std::move(results[w]));
            if (promoted >= config.max_pairings) break;  // discard the rest of the wave
        }
        at += wave;
    }
    return outcomes;
}

}  // namespace leakaudit

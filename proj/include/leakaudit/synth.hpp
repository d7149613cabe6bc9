#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "leakaudit/corpus.hpp"

#include <json.hpp>

namespace leakaudit {

// A planted lexical signal: when a trait-true author comments inside
// `scope`, `token` is appended with probability p.
struct MarkerSpec {
    std::string token;
    double p = 0.0;
    std::string scope;  // subreddit name; empty means every subreddit
};

struct SynthConfig {
    std::size_t n_authors = 200;
    std::size_t comments_per_author = 20;
    std::vector<std::string> subreddits = {"r/synth"};
    std::size_t base_vocab_size = 1000;
    std::size_t tokens_per_comment = 20;
    std::map<Trait, MarkerSpec> trait_markers;  // ordered: deterministic draws
    std::map<Trait, double> trait_priors;       // absent traits default to 0.5
    std::uint64_t seed = 0;
};

// Throws UsageError on out-of-range probabilities, empty fields, marker
// tokens colliding with the base vocabulary or each other, or a marker
// scoped to an unknown subreddit.
void validate(const SynthConfig& config);

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthConfig& config);

struct SynthOutput {
    std::string profiles_path;
    std::string comments_path;
};

// Writes author_profiles.csv and comments.csv under out_dir in exactly
// the schema the ingest side consumes. Byte-identical for a given config.
SynthOutput generate(const SynthConfig& config, const std::string& out_dir);

// Accuracy of the optimal rule "predict true iff marker present" on a
// balanced population with injection probability p: (1 + p) / 2.
double bayes_accuracy(double p);

}  // namespace leakaudit

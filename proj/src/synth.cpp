#include "leakaudit/synth.hpp"

#include <charconv>
#include <filesystem>
#include <set>
#include <sstream>

#include "leakaudit/csv.hpp"
#include "leakaudit/errors.hpp"
#include "leakaudit/io.hpp"
#include "leakaudit/rng.hpp"

namespace leakaudit {

namespace {

bool is_base_token(const std::string& token, std::size_t vocab_size) {
    if (token.rfind("tok", 0) != 0 || token.size() == 3) return false;
    std::size_t n = 0;
    const char* begin = token.data() + 3;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, n);
    return ec == std::errc{} && ptr == end && n < vocab_size;
}

}  // namespace

void validate(const SynthConfig& config) {
    if (config.n_authors == 0) throw UsageError("synth: n_authors must be > 0");
    if (config.comments_per_author == 0)
        throw UsageError("synth: comments_per_author must be > 0");
    if (config.subreddits.empty()) throw UsageError("synth: need at least one subreddit");
    for (const auto& s : config.subreddits) {
        if (s.empty()) throw UsageError("synth: empty subreddit name");
    }
    if (config.base_vocab_size == 0) throw UsageError("synth: base_vocab_size must be > 0");
    if (config.tokens_per_comment == 0)
        throw UsageError("synth: tokens_per_comment must be > 0");

    std::set<std::string> seen;
    for (const auto& [trait, marker] : config.trait_markers) {
        if (marker.token.empty())
            throw UsageError("synth: empty marker token for " +
                             std::string(trait_name(trait)));
        if (!(marker.p >= 0.0 && marker.p <= 1.0))
            throw UsageError("synth: marker probability out of [0,1] for " +
                             std::string(trait_name(trait)));
        if (is_base_token(marker.token, config.base_vocab_size))
            throw UsageError("synth: marker \"" + marker.token +
                             "\" collides with the base vocabulary");
        if (!seen.insert(marker.token).second)
            throw UsageError("synth: marker \"" + marker.token + "\" used twice");
        if (!marker.scope.empty()) {
            bool known = false;
            for (const auto& s : config.subreddits) known = known || s == marker.scope;
            if (!known)
                throw UsageError("synth: marker scope \"" + marker.scope +
                                 "\" is not a configured subreddit");
        }
    }
    for (const auto& [trait, prior] : config.trait_priors) {
        if (!(prior >= 0.0 && prior <= 1.0))
            throw UsageError("synth: prior out of [0,1] for " +
                             std::string(trait_name(trait)));
    }
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c;
    if (j.contains("n_authors")) c.n_authors = j.at("n_authors").get<std::size_t>();
    if (j.contains("comments_per_author"))
        c.comments_per_author = j.at("comments_per_author").get<std::size_t>();
    if (j.contains("subreddits"))
        c.subreddits = j.at("subreddits").get<std::vector<std::string>>();
    if (j.contains("base_vocab_size"))
        c.base_vocab_size = j.at("base_vocab_size").get<std::size_t>();
    if (j.contains("tokens_per_comment"))
        c.tokens_per_comment = j.at("tokens_per_comment").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trait_markers")) {
        for (const auto& [name, spec] : j.at("trait_markers").items()) {
            const auto trait = trait_from_name(name);
            if (!trait) throw UsageError("synth config: unknown trait \"" + name + "\"");
            MarkerSpec m;
            m.token = spec.at("token").get<std::string>();
            m.p = spec.at("p").get<double>();
            if (spec.contains("scope")) m.scope = spec.at("scope").get<std::string>();
            c.trait_markers[*trait] = std::move(m);
        }
    }
    if (j.contains("trait_priors")) {
        for (const auto& [name, prior] : j.at("trait_priors").items()) {
            const auto trait = trait_from_name(name);
            if (!trait) throw UsageError("synth config: unknown trait \"" + name + "\"");
            c.trait_priors[*trait] = prior.get<double>();
        }
    }
    return c;
}

nlohmann::json to_json(const SynthConfig& config) {
    nlohmann::json markers = nlohmann::json::object();
    for (const auto& [trait, m] : config.trait_markers) {
        markers[std::string(trait_name(trait))] = {
            {"token", m.token}, {"p", m.p}, {"scope", m.scope}};
    }
    nlohmann::json priors = nlohmann::json::object();
    for (const auto& [trait, p] : config.trait_priors) {
        priors[std::string(trait_name(trait))] = p;
    }
    return {{"n_authors", config.n_authors},
            {"comments_per_author", config.comments_per_author},
            {"subreddits", config.subreddits},
            {"base_vocab_size", config.base_vocab_size},
            {"tokens_per_comment", config.tokens_per_comment},
            {"trait_markers", std::move(markers)},
            {"trait_priors", std::move(priors)},
            {"seed", config.seed}};
}

namespace {

struct SynthAuthor {
    std::string username;
    TraitVector traits;  // all seven set
    std::string mbti;
    std::string gender;
    std::uint32_t age = 0;
    std::string country;
};

bool drawn_trait(const SynthConfig& config, Trait trait, Rng& rng) {
    const auto it = config.trait_priors.find(trait);
    const double prior = (it == config.trait_priors.end()) ? 0.5 : it->second;
    return rng.uniform() < prior;
}

SynthAuthor make_author(const SynthConfig& config, std::size_t index, Rng& rng) {
    SynthAuthor a;
    a.username = "author_" + std::to_string(index);

    const bool female = drawn_trait(config, Trait::is_female, rng);
    const bool us = drawn_trait(config, Trait::country_us, rng);
    const bool young = drawn_trait(config, Trait::age_under_25, rng);
    const bool perceiving = drawn_trait(config, Trait::perceiving, rng);
    const bool thinking = drawn_trait(config, Trait::thinking, rng);
    const bool introverted = drawn_trait(config, Trait::introverted, rng);
    const bool intuitive = drawn_trait(config, Trait::intuitive, rng);

    a.traits.is_female = female;
    a.traits.country_us = us;
    a.traits.age_under_25 = young;
    a.traits.perceiving = perceiving;
    a.traits.thinking = thinking;
    a.traits.introverted = introverted;
    a.traits.intuitive = intuitive;

    a.gender = female ? "f" : "m";
    a.country = us ? "us" : "de";
    // One bounded draw on either branch keeps the stream in lockstep.
    a.age = young ? 18 + static_cast<std::uint32_t>(rng.below(7))
                  : 25 + static_cast<std::uint32_t>(rng.below(40));
    a.mbti.push_back(introverted ? 'I' : 'E');
    a.mbti.push_back(intuitive ? 'N' : 'S');
    a.mbti.push_back(thinking ? 'T' : 'F');
    a.mbti.push_back(perceiving ? 'P' : 'J');
    return a;
}

}  // namespace

SynthOutput generate(const SynthConfig& config, const std::string& out_dir) {
    validate(config);
    std::filesystem::create_directories(out_dir);

    SynthOutput out;
    out.profiles_path = (std::filesystem::path(out_dir) / "author_profiles.csv").string();
    out.comments_path = (std::filesystem::path(out_dir) / "comments.csv").string();

    Rng rng(derive_seed(config.seed, "synth"));

    std::vector<SynthAuthor> authors;
    authors.reserve(config.n_authors);
    for (std::size_t i = 0; i < config.n_authors; ++i) {
        authors.push_back(make_author(config, i, rng));
    }

    {
        std::ostringstream f;
        write_csv_row(f, {"username", "mbti", "gender", "age", "country"});
        for (const auto& a : authors) {
            write_csv_row(f, {a.username, a.mbti, a.gender, std::to_string(a.age), a.country});
        }
        write_file_atomic(out.profiles_path, f.str());
    }

    std::ostringstream f;
    write_csv_row(f, {"comment_id", "username", "subreddit", "created", "body"});

    std::size_t comment_index = 0;
    std::string body;
    for (const auto& a : authors) {
        for (std::size_t j = 0; j < config.comments_per_author; ++j) {
            const std::string& subreddit =
                config.subreddits[rng.below(config.subreddits.size())];

            body.clear();
            for (std::size_t t = 0; t < config.tokens_per_comment; ++t) {
                if (t > 0) body.push_back(' ');
                body.append("tok");
                body.append(std::to_string(rng.below(config.base_vocab_size)));
            }
            for (const auto& [trait, marker] : config.trait_markers) {
                if (!marker.scope.empty() && marker.scope != subreddit) continue;
                if (!a.traits.get(trait).value()) continue;
                if (rng.uniform() < marker.p) {
                    body.push_back(' ');
                    body.append(marker.token);
                }
            }

            write_csv_row(f, {"c" + std::to_string(comment_index), a.username, subreddit,
                              std::to_string(1500000000 + comment_index), body});
            ++comment_index;
        }
    }
    write_file_atomic(out.comments_path, f.str());
    return out;
}

double bayes_accuracy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("bayes_accuracy: p must be in [0,1]");
    return 0.5 * (1.0 + p);
}

}  // namespace leakaudit
